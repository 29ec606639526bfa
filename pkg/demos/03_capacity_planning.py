"""How many users can a template database safely hold?

Two limits matter: the pigeonhole count (beyond it, two acceptance balls
MUST overlap) and the birthday-style size (near-collision odds reach 50%
much earlier). This prints both for a range of configurations and emits
the curve data linking safe size to dimension and threshold.
"""

import random

from nearcollide import capacity_report, random_database, hamming
from nearcollide.bounds import curve_fixed_n, curves_csv

# ---------------------------------------------------------------------------
# Reports across configurations

for n, eps in ((15, 10), (64, 6), (128, 12), (512, 51)):
    rep = capacity_report(n, eps)
    print(
        f"n={n:>4} eps={eps:>3}: ball=2^{rep.ball_volume.bit_length() - 1}"
        f" pigeonhole k={rep.dirichlet_k if rep.dirichlet_k < 10**9 else '~2^' + str(rep.dirichlet_k.bit_length() - 1)}"
        f" birthday log2(k)={rep.log2_birthday_k:6.1f}"
        f" {'SAFE' if rep.safe else 'small'}"
    )

# ---------------------------------------------------------------------------
# The birthday estimate versus an actual simulation at a toy size

n, eps = 20, 3
rep = capacity_report(n, eps)
k = round(rep.birthday_k)
trials = 2000
rng = random.Random(0)
hits = 0
for _ in range(trials):
    db = random_database(n, k, seed=rng.getrandbits(48))
    found = any(
        hamming(db.members[i], db.members[j]) <= eps
        for i in range(k)
        for j in range(i + 1, k)
    )
    hits += found
print(f"\nn={n} eps={eps}: birthday size k={k};",
      f"simulated near-collision probability {hits / trials:.3f} (expect ~0.4-0.5)")

# ---------------------------------------------------------------------------
# Curve data: how the safe size falls as the threshold grows

points = curve_fixed_n(128, [0, 5, 10, 20, 30, 40, 50])
print("\nsafe size at n=128 as the threshold grows:")
print(curves_csv(points, comments=["panel=b n=128"]))
