"""Closed-form energy per packet and efficiency of DT, SRC and MRC."""

from coopwsn.codecs import CodeSpec
from coopwsn.energy import EccLinkBudget, tx_energy_saving, uncoded_tx_power
from coopwsn.error_control import ProtocolConfig, Strategy
from coopwsn.montecarlo import ENERGY_TABLE_COLUMNS, Scenario, energy_table

budget = EccLinkBudget()
eb = uncoded_tx_power(budget) / budget.bit_rate
print(f"uncoded transmit energy per bit: {eb:.3e} J")
for gain in (0.0, 3.0, 6.0, 10.0):
    s = tx_energy_saving(EccLinkBudget(ecc_gain_db=gain))
    print(f"  coding gain {gain:4.1f} dB saves {s:.3e} J/bit ({s / eb:.0%})")

sc = Scenario(
    protocol=ProtocolConfig(Strategy.FEC_ONLY, code=CodeSpec.rs(31, 21), detector=CodeSpec.none()),
    sweep_points=(0.0, 5.0, 10.0, 15.0, 20.0),
    payload_bits=105,
)
print()
print("snr_db " + " ".join(f"{c:>9}" for c in ENERGY_TABLE_COLUMNS))
for row in energy_table(sc):
    print(f"{row[0]:6.1f} " + " ".join(f"{v:9.3g}" for v in row[1:]))
