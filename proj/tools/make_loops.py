#!/usr/bin/env python3
"""Regenerate the bundled loop-sample files under data/.

Each file describes a closed loop of cubics x^3 - 3x + c(t) by listing the
coefficient rows `c3 c2 c1 c0` for N equally spaced parameters; complex
coefficients are written as a single `re,im` token.  The cubic family has
critical values c = +/-2, where two roots collide.

* loop_c2.txt           circle of radius 0.5 around c = 2 (encircles one
                        critical value; the roots braid by one transposition)
* loop_identity.txt     constant family (no motion at all)
* loop_near_critical.txt undersampled circle around c = 2 passing within
                        0.01 of it (exercises the refinement path)
"""

import cmath
import os

OUT = os.path.join(os.path.dirname(__file__), os.pardir, "data")


def token(z: complex) -> str:
    if z.imag == 0.0:
        return repr(z.real)
    return f"{z.real!r},{z.imag!r}"


def write_loop(name: str, centers) -> None:
    path = os.path.join(OUT, name)
    with open(path, "w", encoding="ascii", newline="\n") as f:
        f.write(f"t_count={len(centers)}\n")
        for c in centers:
            f.write(f"1 0 -3 {token(c)}\n")
    print(f"wrote {path} ({len(centers)} rows)")


def circle(center: complex, radius: float, n: int):
    # Midpoint-offset grid: avoids placing samples on the real axis, where
    # complex-conjugate root pairs would tie in the ordering.
    return [
        center + radius * cmath.exp(2j * cmath.pi * (k + 0.5) / n)
        for k in range(n)
    ]


def main() -> None:
    os.makedirs(OUT, exist_ok=True)
    write_loop("loop_c2.txt", circle(2.0 + 0.0j, 0.5, 64))
    write_loop("loop_identity.txt", [complex(0.5, 0.0)] * 16)
    write_loop("loop_near_critical.txt", circle(2.2 + 0.0j, 0.21, 16))


if __name__ == "__main__":
    main()
