"""
Plot Results from per-c Uniformity Experiments

Reads experiment_results.csv (written by scripts/run_experiments.py) and generates:
1. cc-uniformity vs c for every function on a field
2. Worst-case cc- vs c-uniformity per function
3. Histogram of the per-c cc-spectrum
4. Profile runtime vs field order

Usage:
    python plot_results.py [input_csv]

Output:
    - PNG files saved to plots/ directory
"""

import csv
import sys
from collections import defaultdict
from typing import Any, Dict, List

try:
    import matplotlib.pyplot as plt
    import matplotlib
    matplotlib.use('Agg')  # Non-interactive backend
    HAS_MATPLOTLIB = True
except ImportError:
    HAS_MATPLOTLIB = False
    print("Warning: matplotlib not installed. Install with: pip install matplotlib")
    print("Plots will not be generated, but you can still view the CSV data.")

COLORS = ['#2E86AB', '#A23B72', '#F18F01', '#3B8B5A', '#6C5B7B', '#C06C84']
KIND_COLORS = {'cc': '#2E86AB', 'c': '#A23B72'}


def load_results(filename: str) -> List[Dict[str, Any]]:
    """Load experiment results from CSV."""
    results = []
    with open(filename, 'r') as f:
        reader = csv.DictReader(f)
        for row in reader:
            for key in ['p', 'n', 'c', 'uniformity']:
                row[key] = int(row[key])
            row['profile_ms'] = float(row['profile_ms'])
            results.append(row)
    return results


def aggregate_by_field_and_func(results: List[Dict[str, Any]]) -> Dict[str, Dict[str, Dict[str, Dict[int, int]]]]:
    """
    Group results as data[field][func][kind] = {c: uniformity}.
    """
    data = defaultdict(lambda: defaultdict(dict))
    for row in results:
        data[row['field']][row['func']].setdefault(row['kind'], {})[row['c']] = row['uniformity']
    return data


def _safe_name(field: str) -> str:
    return field.replace('(', '_').replace(')', '').replace('^', '_').replace(';', '_').replace('=', '')


def plot_profile(field: str, funcs: Dict, output_file: str):
    """cc-uniformity as a function of c (enc order) for every function on one field."""
    if not HAS_MATPLOTLIB:
        return

    plt.figure(figsize=(10, 6))
    for idx, (func, kinds) in enumerate(sorted(funcs.items())):
        profile = kinds.get('cc')
        if not profile:
            continue
        cs = sorted(profile)
        plt.plot(cs, [profile[c] for c in cs], marker='o', label=func,
                 color=COLORS[idx % len(COLORS)], linewidth=1.5, markersize=4)

    plt.xlabel('c (integer encoding)', fontsize=12)
    plt.ylabel('cc-differential uniformity', fontsize=12)
    plt.title(f'cc-uniformity per c on {field}', fontsize=14, fontweight='bold')
    plt.legend(fontsize=10)
    plt.grid(True, alpha=0.3)
    plt.tight_layout()

    plt.savefig(output_file, dpi=300, bbox_inches='tight')
    print(f"  Saved: {output_file}")
    plt.close()


def plot_worst_case(data: Dict, output_file: str = "plots/worst_case.png"):
    """Grouped bars: max over c of the cc- and c-uniformity, one pair per (field, function)."""
    if not HAS_MATPLOTLIB:
        return

    labels, cc_max, c_max = [], [], []
    for field in sorted(data):
        for func in sorted(data[field]):
            kinds = data[field][func]
            labels.append(f"{func}\n{field}")
            cc_max.append(max(kinds.get('cc', {0: 0}).values()))
            c_max.append(max(kinds.get('c', {0: 0}).values()))

    xs = range(len(labels))
    width = 0.4
    plt.figure(figsize=(max(10, len(labels) * 0.6), 6))
    plt.bar([x - width / 2 for x in xs], cc_max, width, label='cc', color=KIND_COLORS['cc'])
    plt.bar([x + width / 2 for x in xs], c_max, width, label='c', color=KIND_COLORS['c'])

    plt.xticks(list(xs), labels, rotation=90, fontsize=7)
    plt.ylabel('Max uniformity over c', fontsize=12)
    plt.yscale('log', base=2)
    plt.title('Worst-case cc- vs c-uniformity', fontsize=14, fontweight='bold')
    plt.legend(fontsize=10)
    plt.grid(True, alpha=0.3, axis='y')
    plt.tight_layout()

    plt.savefig(output_file, dpi=300, bbox_inches='tight')
    print(f"  Saved: {output_file}")
    plt.close()


def plot_spectrum_histogram(results: List[Dict[str, Any]], output_file: str = "plots/cc_spectrum.png"):
    """How often each cc-uniformity value occurs over all (field, function, c)."""
    if not HAS_MATPLOTLIB:
        return

    counts = defaultdict(int)
    for row in results:
        if row['kind'] == 'cc':
            counts[row['uniformity']] += 1
    if not counts:
        return
    values = sorted(counts)

    plt.figure(figsize=(10, 6))
    plt.bar([str(v) for v in values], [counts[v] for v in values], color='#F18F01')
    plt.xlabel('cc-differential uniformity', fontsize=12)
    plt.ylabel('Number of (function, c) pairs', fontsize=12)
    plt.title('Distribution of cc-uniformity', fontsize=14, fontweight='bold')
    plt.grid(True, alpha=0.3, axis='y')
    plt.tight_layout()

    plt.savefig(output_file, dpi=300, bbox_inches='tight')
    print(f"  Saved: {output_file}")
    plt.close()


def plot_runtime(results: List[Dict[str, Any]], output_file: str = "plots/runtime.png"):
    """Mean profile runtime vs field order, one line per kind."""
    if not HAS_MATPLOTLIB:
        return

    per_profile = {}
    for row in results:
        per_profile[(row['field'], row['func'], row['kind'])] = (row['p'] ** row['n'], row['profile_ms'])

    plt.figure(figsize=(10, 6))
    for kind, color in KIND_COLORS.items():
        by_order = defaultdict(list)
        for (_, _, k), (order, ms) in per_profile.items():
            if k == kind:
                by_order[order].append(ms)
        if not by_order:
            continue
        orders = sorted(by_order)
        plt.plot(orders, [sum(by_order[q]) / len(by_order[q]) for q in orders], marker='o',
                 label=f'{kind}-profile', color=color, linewidth=2, markersize=8)

    plt.xlabel('Field order q', fontsize=12)
    plt.ylabel('Profile runtime (milliseconds)', fontsize=12)
    plt.xscale('log')
    plt.yscale('log')
    plt.title('Per-c Profile Runtime', fontsize=14, fontweight='bold')
    plt.legend(fontsize=10)
    plt.grid(True, alpha=0.3)
    plt.tight_layout()

    plt.savefig(output_file, dpi=300, bbox_inches='tight')
    print(f"  Saved: {output_file}")
    plt.close()


def generate_all_plots(input_csv: str = "results/experiment_results.csv", output_dir: str = "plots"):
    """Generate all plots from experiment results."""
    import os

    if not os.path.exists(output_dir):
        os.makedirs(output_dir)
        print(f"Created output directory: {output_dir}")

    print(f"\nLoading results from {input_csv}...")
    results = load_results(input_csv)
    print(f"  Loaded {len(results)} result rows")

    print(f"\nAggregating data by field and function...")
    data = aggregate_by_field_and_func(results)
    print(f"  Found {len(data)} fields")

    if not HAS_MATPLOTLIB:
        print("\nSkipping plots (matplotlib not installed)")
        return

    print(f"\nGenerating plots to {output_dir}/...")

    for field, funcs in sorted(data.items()):
        plot_profile(field, funcs, f"{output_dir}/profile_{_safe_name(field)}.png")
    plot_worst_case(data, f"{output_dir}/worst_case.png")
    plot_spectrum_histogram(results, f"{output_dir}/cc_spectrum.png")
    plot_runtime(results, f"{output_dir}/runtime.png")

    print(f"\n[OK] All plots generated successfully!")
    print(f"  Location: {output_dir}/")
    print(f"\nPlots created:")
    print(f"  1. profile_<field>.png - cc-uniformity per c")
    print(f"  2. worst_case.png - max cc vs c uniformity")
    print(f"  3. cc_spectrum.png - distribution of cc-uniformity")
    print(f"  4. runtime.png - profile runtime vs field order")


if __name__ == "__main__":
    input_file = "results/experiment_results.csv"

    if len(sys.argv) > 1:
        input_file = sys.argv[1]

    try:
        generate_all_plots(input_file)
    except FileNotFoundError:
        print(f"Error: File '{input_file}' not found!")
        print(f"Please run 'python scripts/run_experiments.py' first to generate results.")
        sys.exit(1)
    except Exception as e:
        print(f"Error generating plots: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
