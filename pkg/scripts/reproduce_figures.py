"""Write every figure's CSV data and SVG rendering.

    python scripts/reproduce_figures.py [out_dir]
"""

import sys
from pathlib import Path

from hcs_lab.figures import reproduce_figures


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("figures")
    status = reproduce_figures(out)
    for name, s in status.items():
        print(f"{name:6s} {s}")
    return 0 if all(s == "ok" for s in status.values()) else 3


if __name__ == "__main__":
    sys.exit(main())
