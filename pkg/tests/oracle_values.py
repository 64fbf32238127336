"""Frozen reference values; regenerate with ``python3 tests/make_oracles.py``."""

N_Q = 6.25
Q = 0.16432017941824719168
R_Q = 6.0856798205817528083
C_Q = 1.1182199294368243094
T_F = 8.2087474807078667871
Q_KAC3 = 0.3819660112501051518
A10 = 0.8
A21 = 0.81044089847310778086
SHARP_E2 = 0.64835271877848622469
LORENTZ_1PU11 = 1.0295963225039160633
C_K = [0.16, 0.32840722495894909688, 0.49726812816188870152, 0.66614756664939412161, 0.83502767556553488544, 1.0039078071732461928, 1.172787939517570387]
