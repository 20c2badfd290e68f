"""Leading power of N for the exact amplitude of small vacuum maps, next to
whether each map is melonic."""

from strandcalc.melonic import dominance_scan

report = dominance_scan(V_max=3, rep="A")
for e in report.entries:
    if not e["name"].startswith("V2"):
        print(f"{e['name']:36s} V={e['V']}  N^{e['leading_power']}  melonic={e['melonic']}")
print(f"{len(report.entries)} maps, violations: {len(report.violations)}")
