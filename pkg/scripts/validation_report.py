"""Run the closed-form vs brute-force audit and write JSON and CSV reports.

    python scripts/validation_report.py [out_dir] [draws]
"""

import sys
from pathlib import Path

from hcs_lab.cli import main as cli_main


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("validation")
    draws = sys.argv[2] if len(sys.argv) > 2 else "500"
    code = cli_main(["validate", "--draws", draws, "-o", str(out / "report.json")])
    return code or cli_main(["validate", "--draws", draws, "-o", str(out / "report.csv")])


if __name__ == "__main__":
    sys.exit(main())
