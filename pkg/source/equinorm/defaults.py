"""Default settings that people will probably want to use most often"""

# Truncation order N (polynomial grade) used when a spec does not give one.
truncation_order = 6

# Flow-conjugacy harness.
rk4_steps = 2048
horizon = 1.0
radii = tuple(0.1*2.0**(-j) for j in range(5))
random_directions = 3
direction_seed = 20231107
blowup_norm = 1.0e6

# Approximate quaternionic rotations.
approximate_tolerance = 1.0e-12
max_denominator = 10**12

# Largest order r^{2k} used by the structure-constant oracle check.
oracle_max_order = 4
