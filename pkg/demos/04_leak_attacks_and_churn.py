"""Master-feature attacks on a leaked database, plus user churn handling.

The toy protection transform is XOR with a per-user token. When tokens
leak together with templates, each hidden feature is one inversion away;
partitioning the recovered features compresses one-per-user attack
material into one item per cluster, verified against every record.
"""

from nearcollide import (
    enroll_random,
    hamming,
    master_feature_attack,
    masterkey_attack,
    partition_database,
    random_database,
    transform,
)
from nearcollide.core import Template
from nearcollide.partition import add_user, remove_user

# ---------------------------------------------------------------------------
# Leak scenario at a deliberately undersized configuration

N, TAU, K = 15, 10, 50
records = enroll_random(N, K, seed=3)
print(f"enrolled {K} users, {N}-bit templates, verification threshold {TAU}")

feature_leak = [(r.token, r.template) for r in records]
attack = master_feature_attack(feature_leak, TAU, seed=1)
print(f"master-feature attack: {attack.inversion_calls} inversions ->"
      f" {len(attack.items)} item(s), coverage {attack.coverage:.2f}")

naive = master_feature_attack(feature_leak, TAU, use_partition=False)
print(f"without partitioning the attacker carries {len(naive.items)} items")

key_leak = [(r.feature, r.template) for r in records]
keys = masterkey_attack(key_leak, TAU, seed=1)
print(f"masterkey attack: {len(keys.items)} item(s), coverage {keys.coverage:.2f}")

item = attack.items[0]
rec = records[0]
print("spot check, first record:",
      f"d(transform(item, token), template) ="
      f" {hamming(transform(item, rec.token), rec.template)} <= {TAU}")

# ---------------------------------------------------------------------------
# Incremental churn on a healthier configuration

db = random_database(64, 12, seed=9)
mts = partition_database(db, 6)
print(f"\nn=64 database with {db.size} users -> {mts.size} master templates")

new_template = Template.from_string("1" * 32 + "0" * 32)
mts, db = add_user(mts, db, new_template, 6)
print(f"after add_user: {db.size} users, {mts.size} entries")

report = remove_user(db, new_template, 6, removed_before=0)
print(f"after remove_user: affected neighbors {len(report.affected)},"
      f" retired ball volume {report.ball_volume},"
      f" capacity breached: {report.capacity_breached}")
