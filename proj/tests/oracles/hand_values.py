# Copyright 2026 The oodkit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Brute-force reference values for the C++ unit tests.

Standard library only. Run with `python3 hand_values.py`; the printed values
are frozen into tests/support/frozen_values.hpp.
"""

import itertools
import json
import math
import re
import sys


def soft_assign(e, mus, alpha=1.0):
    raw = []
    for mu in mus:
        d2 = sum((a - b) ** 2 for a, b in zip(e, mu))
        raw.append((1.0 + d2 / alpha) ** (-(alpha + 1.0) / 2.0))
    s = sum(raw)
    return [r / s for r in raw]


def target(q):
    k = len(q[0])
    f = [sum(row[j] for row in q) for j in range(k)]
    out = []
    for row in q:
        w = [row[j] ** 2 / f[j] for j in range(k)]
        s = sum(w)
        out.append([x / s for x in w])
    return out


def kl_rows(p, q):
    return [sum(a * math.log(a / b) for a, b in zip(pr, qr) if a > 0) for pr, qr in zip(p, q)]


def nt_xent(z, tau):
    def cos(a, b):
        na = math.sqrt(sum(x * x for x in a))
        nb = math.sqrt(sum(x * x for x in b))
        return sum(x * y for x, y in zip(a, b)) / (na * nb)

    n = len(z)
    total = 0.0
    for i in range(n):
        pos = i ^ 1
        den = sum(math.exp(cos(z[i], z[j]) / tau) for j in range(n) if j != i)
        total += -math.log(math.exp(cos(z[i], z[pos]) / tau) / den)
    return total / n


def auroc_pairs(ood, idd):
    wins = 0.0
    for o, i in itertools.product(ood, idd):
        wins += 1.0 if o > i else 0.5 if o == i else 0.0
    return wins / (len(ood) * len(idd))


def fpr_sweep(ood, idd, level):
    best = None
    for t in sorted(set(ood + idd)):
        tpr = sum(o >= t for o in ood) / len(ood)
        if tpr >= level:
            best = t
    return best, sum(i >= best for i in idd) / len(idd)


def coverage_prefix(sizes, coverage):
    total = sum(sizes.values())
    acc = 0
    for n, (label, size) in enumerate(sizes.items(), start=1):
        acc += size
        if acc / total >= coverage:
            return n
    return len(sizes)


def pearson(x, y):
    mx = sum(x) / len(x)
    my = sum(y) / len(y)
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def main():
    q = [[0.9, 0.1], [0.5, 0.5]]
    p = target(q)
    rows = kl_rows(p, q)
    z = [[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 1.0]]
    vals = {
        "target_p": p,
        "kl_rows": rows,
        "kl_mean": sum(rows) / 2,
        "kl_onehot": kl_rows([[1.0, 0.0]], [[0.9, 0.1]])[0],
        "soft_assign": soft_assign([0.0, 0.0], [[0.0, 0.0], [2.0, 0.0]]),
        "nt_xent_orthogonal": nt_xent(z, 0.5),
        "ln_1p_2e-2": math.log(1 + 2 * math.exp(-2)),
        "nt_xent_flat_tau": nt_xent([[1.0, 0.2], [0.3, 1.0], [-1.0, 0.5], [0.1, -0.7]], 1e6),
        "ln3": math.log(3),
        "auroc_example": auroc_pairs([1, 2], [1, 0]),
        "fpr_example": fpr_sweep([0.9, 0.4], [0.5, 0.1], 0.95),
        "score_ln_half_quarter": (math.log(0.5) + math.log(0.25)) / 2,
        "ln_geometric": math.sqrt(0.125),
        "coverage_prefix": coverage_prefix({"A": 50, "B": 30, "C": 10, "D": 10}, 0.75),
        "pearson_123_132": pearson([1, 2, 3], [1, 3, 2]),
        "gmm_peak": -math.log(2 * math.pi),
        "sqrt_freq_law": [2 / 3, 1 / 3],
    }
    return vals


# Frozen constant -> oracle key (flattened in row-major order).
FROZEN = {
    "kTargetP": "target_p",
    "kKlRows": "kl_rows",
    "kKlMean": "kl_mean",
    "kKlOneHot": "kl_onehot",
    "kSoftAssign": "soft_assign",
    "kNtXentOrthogonal": "nt_xent_orthogonal",
    "kNtXentFlatTau": "nt_xent_flat_tau",
    "kAurocExample": "auroc_example",
    "kFprExampleThreshold": ("fpr_example", 0),
    "kFprExample": ("fpr_example", 1),
    "kScoreLnHalfQuarter": "score_ln_half_quarter",
    "kLnGeometric": "ln_geometric",
    "kCoveragePrefix": "coverage_prefix",
    "kPearson123132": "pearson_123_132",
    "kGmmPeak": "gmm_peak",
}


def flatten(v):
    if isinstance(v, (list, tuple)):
        return [x for item in v for x in flatten(item)]
    return [float(v)]


def check(header, vals):
    text = open(header).read()
    bad = 0
    for name, key in FROZEN.items():
        m = re.search(r"\b" + name + r"(?:\[[^=]*)?\s*=\s*([^;]+);", text)
        if not m:
            print("missing", name)
            bad += 1
            continue
        frozen = [float(x) for x in re.findall(r"-?[0-9][0-9.eE+-]*", m.group(1))]
        want = flatten(vals[key[0]][key[1]] if isinstance(key, tuple) else vals[key])
        if len(frozen) != len(want) or any(abs(a - b) > 1e-12 for a, b in zip(frozen, want)):
            print("mismatch", name, frozen, want)
            bad += 1
    print("checked", len(FROZEN), "constants,", bad, "mismatches")
    return bad


if __name__ == "__main__":
    values = main()
    if len(sys.argv) == 3 and sys.argv[1] == "--check":
        sys.exit(1 if check(sys.argv[2], values) else 0)
    print(json.dumps(values, indent=1))
