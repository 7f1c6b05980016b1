"""
Summary report of per-c uniformity sweeps

Looks for results/experiment_results.csv by default, falls back to root file.
Run:
  python scripts/analyze_results.py
"""
import os
import csv
import sys

# Add parent directory to path if needed
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

print("=" * 80)
print("PER-c UNIFORMITY SUMMARY")
print("=" * 80)
print()

default_paths = [
    os.path.join("results", "experiment_results.csv"),
    "experiment_results.csv",
]

input_file = next((p for p in default_paths if os.path.exists(p)), None)
if not input_file:
    raise FileNotFoundError("experiment_results.csv not found in results/ or root")

with open(input_file, 'r') as f:
    reader = csv.DictReader(f)
    results = list(reader)

by_func = {}
for row in results:
    key = (row['field'], row['func'])
    by_func.setdefault(key, {}).setdefault(row['kind'], []).append(int(row['uniformity']))

print("cc- vs c-uniformity (worst case over c):")
print("-" * 80)
print(f"{'Field':<10} {'Function':<14} {'cc max':<10} {'c max':<10} {'cc time':<12} {'Status'}")
print("-" * 80)

profile_ms = {}
for row in results:
    if row['kind'] == 'cc':
        profile_ms[(row['field'], row['func'])] = float(row['profile_ms'])

for key in sorted(by_func.keys()):
    kinds = by_func[key]
    cc_max = max(kinds.get('cc', [0]))
    c_max = max(kinds.get('c', [0]))

    if cc_max == 1:
        status = "[PccN]"
    elif cc_max == 2:
        status = "[APccN]"
    elif cc_max < c_max:
        status = "[cc < c]"
    else:
        status = ""

    print(f"{key[0]:<10} {key[1]:<14} {cc_max:<10} {c_max:<10} {profile_ms.get(key, 0.0):<12.1f} {status}")

print("-" * 80)
print()
print("Key Findings:")
print("-" * 80)

pccn_rows = [r for r in results if r['kind'] == 'cc' and int(r['uniformity']) == 1]
if pccn_rows:
    funcs = sorted({(r['field'], r['func']) for r in pccn_rows})
    print(f"[OK] {len(pccn_rows)} PccN (function, c) pairs across {len(funcs)} functions")
    for field, func in funcs:
        cs = [r['c'] for r in pccn_rows if (r['field'], r['func']) == (field, func)]
        print(f"     {func} on {field}: c in {{{', '.join(cs)}}}")

apccn = sum(1 for r in results if r['kind'] == 'cc' and int(r['uniformity']) == 2)
if apccn:
    print(f"[OK] {apccn} APccN (function, c) pairs")

lower = sum(1 for key, kinds in by_func.items()
            if 'cc' in kinds and 'c' in kinds and max(kinds['cc']) < max(kinds['c']))
if lower:
    print(f"[NOTE] {lower} functions have a smaller worst-case cc-uniformity than c-uniformity")

print()
print("=" * 80)
