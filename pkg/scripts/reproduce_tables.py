"""Write every table and figure dataset as CSV into one directory.

    python3 scripts/reproduce_tables.py [outdir]
"""

import sys
from pathlib import Path

from spherium import cli


def main(outdir: str = "results") -> None:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    jobs = [
        ("table_results.csv", ["reproduce", "--table", "results"]),
        ("table_coefficients.csv", ["reproduce", "--table", "coefficients"]),
        ("table_groundstate.csv", ["reproduce", "--table", "groundstate"]),
        ("fig2_radius.csv", ["sweep", "--fig", "2", "--n-max", "6"]),
        ("fig4_dimension.csv", ["sweep", "--fig", "4"]),
        ("fig5_closed_form.csv", ["sweep", "--fig", "5", "--d-max", "20"]),
        ("fig6_energy.csv", ["sweep", "--fig", "6"]),
    ]
    for name, argv in jobs:
        code = cli.main([*argv, "--out", str(out / name)])
        print(f"{name:<24} exit {code}")
    for theta2, phi2, tag in [(0, 0, "pole"), (1.5707963267948966, 0, "eq0"), (1.5707963267948966, 1.5707963267948966, "eq90"), (0.7853981633974483, 1.5707963267948966, "mid")]:
        name = f"wavegrid_{tag}.csv"
        code = cli.main(["wavegrid", "--n", "1", "--theta2", str(theta2), "--phi2", str(phi2), "--res", "64", "--out", str(out / name)])
        print(f"{name:<24} exit {code}")


if __name__ == "__main__":
    main(*sys.argv[1:])
