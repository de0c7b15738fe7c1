"""Named coin/qudit configurations used for the published comparison figures."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .rotation import EulerAngles, HalfInt, rotation_matrix
from .walk import Qudit

__all__ = ["Preset", "PRESETS", "get_preset"]


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    j: HalfInt
    angle_exprs: tuple[str, str, str]
    angles: EulerAngles
    qudit_expr: str
    amplitudes: tuple[complex, ...]

    @property
    def qudit(self) -> Qudit:
        return Qudit(self.j, self.amplitudes)

    @property
    def coin(self):
        return rotation_matrix(self.j, self.angles)


_PI = math.pi
_HADAMARD_I = (("0", "-3pi/2", "pi"), EulerAngles(0.0, -1.5 * _PI, _PI))
_THREE = (("0", "acos(-1/3)", "pi"), EulerAngles(0.0, math.acos(-1.0 / 3.0), _PI))
_FOUR = (("0", "2pi/3", "pi"), EulerAngles(0.0, 2.0 * _PI / 3.0, _PI))
_S6 = math.sqrt(6.0)
_TWO_S5 = 2.0 * math.sqrt(5.0)


def _make(name, description, j, angle_pair, qudit_expr, amps) -> Preset:
    exprs, angles = angle_pair
    return Preset(name, description, HalfInt(j), exprs, angles, qudit_expr, tuple(amps))


PRESETS: dict[str, Preset] = {p.name: p for p in (
    _make("fig2a", "two components, symmetric", 1, _HADAMARD_I,
          "(1+i)/2,(1-i)/2", [(1 + 1j) / 2, (1 - 1j) / 2]),
    _make("fig2b", "two components, asymmetric", 1, _HADAMARD_I,
          "(1+i)/2,(1+i)/2", [(1 + 1j) / 2, (1 + 1j) / 2]),
    _make("fig3a", "three components, symmetric", 2, _THREE,
          "(1-i)/sqrt(6),(1+i)/sqrt(6),(1-i)/sqrt(6)",
          [(1 - 1j) / _S6, (1 + 1j) / _S6, (1 - 1j) / _S6]),
    _make("fig3b", "three components, asymmetric", 2, _THREE,
          "(1-i)/sqrt(6),(1-i)/sqrt(6),(1-i)/sqrt(6)",
          [(1 - 1j) / _S6, (1 - 1j) / _S6, (1 - 1j) / _S6]),
    _make("fig4a", "four components, symmetric", 3, _FOUR,
          "(1+3i)/(2sqrt(5)),0,0,(-3+i)/(2sqrt(5))",
          [(1 + 3j) / _TWO_S5, 0, 0, (-3 + 1j) / _TWO_S5]),
    _make("fig4b", "four components, asymmetric", 3, _FOUR,
          "(1+3i)/(2sqrt(5)),0,0,(-3-i)/(2sqrt(5))",
          [(1 + 3j) / _TWO_S5, 0, 0, (-3 - 1j) / _TWO_S5]),
)}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
