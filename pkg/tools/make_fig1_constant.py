"""Regenerate src/ratlab/constants/fig1_x.txt: digits of pi^2 + sqrt(2) - 1.

The value is computed twice with mpmath at different working precisions and
the truncated digit strings must agree before anything is written.

    python3 tools/make_fig1_constant.py [--digits 40000]
"""

import argparse
import sys
from pathlib import Path

import mpmath

OUT = Path(__file__).resolve().parents[1] / "src" / "ratlab" / "constants" / "fig1_x.txt"


def truncated_digits(digits: int, guard: int) -> str:
    mpmath.mp.dps = digits + guard
    value = mpmath.pi ** 2 + mpmath.sqrt(2) - 1
    scaled = int(mpmath.floor(value * mpmath.mpf(10) ** digits))
    text = str(scaled)
    return f"{text[:-digits]}.{text[-digits:]}"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--digits", type=int, default=40000)
    args = ap.parse_args()
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    a = truncated_digits(args.digits, 40)
    b = truncated_digits(args.digits, 90)
    if a != b:
        raise SystemExit("digit strings disagree between working precisions")
    body = "\n".join(a[i:i + 100] for i in range(0, len(a), 100))
    header = (
        "# pi^2 + sqrt(2) - 1\n"
        f"# {args.digits} decimal digits after the point, truncated (not rounded),\n"
        "# so the true value lies in [s, s + 10^-digits].\n"
        "# Generated by tools/make_fig1_constant.py (mpmath, two precisions cross-checked).\n"
    )
    OUT.write_text(header + body + "\n", encoding="ascii")
    print(f"wrote {OUT} ({len(a)} characters)")


if __name__ == "__main__":
    main()
