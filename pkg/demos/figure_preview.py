"""Low-trial preview of the relay BER ordering (uncoded, RS, RS+SRC, RS+MRC)."""

import sys

from coopwsn.figures import run_figure

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 5000
res = run_figure("fig5", trials=trials, sweep_points=[0.0, 10.0, 20.0])
names = ("uncoded", "rs", "rs_src", "rs_mrc")
print("snr_db " + " ".join(f"{n:>10}" for n in names))
for i, row in enumerate(res["uncoded"]):
    print(f"{row.sweep_value:6.1f} " + " ".join(f"{res[n][i].ber:10.2e}" for n in names))
