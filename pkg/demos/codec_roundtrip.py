"""Encode, corrupt and decode one frame with each code."""

import numpy as np

from coopwsn.codecs import CodeSpec, block_codec, crc4_append, crc4_check

rng = np.random.default_rng(3)
payload = rng.integers(0, 2, size=60, dtype=np.uint8)

frame = crc4_append(payload)
print("crc4 clean check:", bool(crc4_check(frame)))
frame[7] ^= 1
print("crc4 after one flip:", bool(crc4_check(frame)))

for spec in (CodeSpec.hamming74(), CodeSpec.rs(7, 3), CodeSpec.rs(31, 21)):
    codec = block_codec(spec)
    padded = np.concatenate([payload, np.zeros(-payload.size % codec.k_bits, np.uint8)])
    word = codec.encode(padded)
    # two flips in the first block: beyond Hamming(7,4), within RS t=2
    noisy = word.copy()
    noisy[[0, 2]] ^= 1
    decoded, failed, corrected = codec.decode(noisy)
    same = np.array_equal(decoded[: payload.size], payload)
    print(f"{spec.label():>10}: {word.size} coded bits, 2 flips -> {int(corrected)} correction(s), "
          f"failure flagged {bool(failed)}, payload recovered {same}")
