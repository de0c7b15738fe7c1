"""Command-line front end.

Subcommands::

    wignerwalk simulate  --j 1/2 --alpha 0 --beta -3pi/2 --gamma pi --qudit "(1+i)/2,(1-i)/2" --t 100
    wignerwalk limit     --preset fig3b --out runs/fig3b
    wignerwalk compare   --preset all --t 100,1000 --jobs 2
    wignerwalk reduce    --m-qubits 2 --qudit "1,0,0,1" --t 50
    wignerwalk presets

Angles and qudit entries are small arithmetic expressions in ``pi``, ``i``,
``sqrt`` and the usual trigonometric functions, with implicit multiplication
(``-3pi/2``, ``(1+3i)/(2sqrt(5))``).  CSV values are written with 17
significant digits and JSON with sorted keys so repeated runs are
byte-identical.
"""

from __future__ import annotations

import argparse
import ast
import cmath
import csv
import json
import logging
import math
import re
import sys
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError, ConsistencyError, DegenerateAngleError, DegenerateCoinError, DomainError
from .limit import (
    LimitDistribution,
    limit_distribution,
    limit_moment_integral,
    positive_modes,
)
from .presets import PRESETS, get_preset
from .rotation import EulerAngles, HalfInt, rotation_matrix
from .tensor import (
    SUPPORTED_M,
    ProductQudit,
    decompose_initial,
    decomposition_deviation,
    tensor_walk_distributions,
)
from .walk import Qudit, SiteDistribution, evolve_distributions, pseudovelocity_histogram, pseudovelocity_moment

log = logging.getLogger("wignerwalk")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DEGENERATE = 3
EXIT_CONSISTENCY = 4

CONFIG_NORM_TOL = 1e-9
# limit moments from the two integration routes must agree to this
ROUTE_TOL = 1e-8
MASS_TOL = 1e-8
REDUCE_TOL = 1e-10
MAX_MOMENT = 4

# ---------------------------------------------------------------------------
# expression literals

_TOKEN = re.compile(r"""
    (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^()])
  | (?P<ws>\s+)
""", re.VERBOSE)

_REAL_FUNCS: dict[str, Callable[[float], float]] = {
    "sqrt": math.sqrt, "exp": math.exp,
    "cos": math.cos, "sin": math.sin, "tan": math.tan,
    "acos": math.acos, "asin": math.asin, "atan": math.atan,
    "arccos": math.acos, "arcsin": math.asin, "arctan": math.atan,
}
_COMPLEX_FUNCS: dict[str, Callable[[complex], complex]] = {
    "sqrt": cmath.sqrt, "exp": cmath.exp,
    "cos": cmath.cos, "sin": cmath.sin, "tan": cmath.tan,
    "acos": cmath.acos, "asin": cmath.asin, "atan": cmath.atan,
    "arccos": cmath.acos, "arcsin": cmath.asin, "arctan": cmath.atan,
}
_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a ** b,
}


class _Expr:
    """Tokenised expression with a map from Python source offsets to input columns."""

    def __init__(self, text: str, base_col: int):
        self.text = text
        pieces: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            mt = _TOKEN.match(text, pos)
            if mt is None:
                raise ConfigError(f"unexpected character {text[pos]!r} in {text!r}", base_col + pos)
            kind = mt.lastgroup
            if kind != "ws":
                pieces.append((kind, mt.group(), base_col + pos))
            pos = mt.end()
        if not pieces:
            raise ConfigError("empty expression", base_col)
        src, cols = [], []
        prev: tuple[str, str, int] | None = None
        for kind, tok, col in pieces:
            if prev is not None and self._implicit(prev, kind, tok):
                src.append("*")
                cols.append(col)
            src.append("**" if tok == "^" else tok)
            cols.append(col)
            prev = (kind, tok, col)
        self.source = ""
        self._offsets: list[tuple[int, int]] = []
        for s, c in zip(src, cols):
            self._offsets.append((len(self.source), c))
            self.source += s + " "
        self.start_col = base_col

    @staticmethod
    def _implicit(prev, kind: str, tok: str) -> bool:
        pkind, ptok, _ = prev
        left = pkind == "num" or (pkind == "name" and ptok not in _REAL_FUNCS) or ptok == ")"
        right = kind in ("num", "name") or tok == "("
        return left and right

    def column(self, offset: int) -> int:
        col = self.start_col
        for start, c in self._offsets:
            if start > offset:
                break
            col = c
        return col


def _evaluate(text: str, allow_complex: bool, base_col: int = 1) -> complex | float:
    expr = _Expr(text, base_col)
    try:
        tree = ast.parse(expr.source, mode="eval")
    except SyntaxError as exc:
        # offset 0 means the input ended early
        col = expr.column(exc.offset - 1) if exc.offset else base_col + len(text)
        raise ConfigError(f"cannot parse {text!r}: {exc.msg}", col) from None

    def fail(node, msg):
        raise ConfigError(msg, expr.column(getattr(node, "col_offset", 0)))

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and type(node.value) in (int, float):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id == "pi":
                return math.pi
            if node.id == "i":
                if not allow_complex:
                    fail(node, f"imaginary unit not allowed in {text!r}")
                return 1j
            fail(node, f"unknown name {node.id!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            lhs, rhs = ev(node.left), ev(node.right)
            try:
                return _BINOPS[type(node.op)](lhs, rhs)
            except ZeroDivisionError:
                fail(node, f"division by zero in {text!r}")
            except OverflowError:
                fail(node, f"overflow in {text!r}")
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _REAL_FUNCS and len(node.args) == 1 and not node.keywords):
            arg = ev(node.args[0])
            name = node.func.id
            if isinstance(arg, complex) and arg.imag != 0.0:
                return _COMPLEX_FUNCS[name](arg)
            try:
                return _REAL_FUNCS[name](float(arg.real if isinstance(arg, complex) else arg))
            except ValueError:
                if allow_complex:
                    return _COMPLEX_FUNCS[name](complex(arg))
                fail(node, f"{name} argument out of range in {text!r}")
        fail(node, f"unsupported expression in {text!r}")

    return ev(tree)


def parse_real(text: str) -> float:
    """Evaluate an angle expression such as ``-3pi/2`` or ``acos(-1/3)``."""
    v = _evaluate(str(text), allow_complex=False)
    if isinstance(v, complex):
        if v.imag != 0.0:
            raise ConfigError(f"{text!r} is not real", 1)
        v = v.real
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(f"{text!r} is not finite", 1)
    return v


def _split_top_level(text: str) -> list[tuple[str, int]]:
    parts, depth, start = [], 0, 0
    for pos, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append((text[start:pos], start + 1))
            start = pos + 1
    parts.append((text[start:], start + 1))
    return parts


def parse_complex_vector(text: str) -> tuple[complex, ...]:
    """Comma-separated complex entries, e.g. ``0.5+0.5i,0.5-0.5i``.

    Parse errors carry the 1-based column in ``text``.
    """
    out = []
    for part, col in _split_top_level(str(text)):
        if not part.strip():
            raise ConfigError(f"empty entry in qudit literal {text!r}", col)
        v = complex(_evaluate(part, allow_complex=True, base_col=col))
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ConfigError(f"non-finite entry {part!r}", col)
        out.append(v)
    return tuple(out)


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class RunConfig:
    """One fully resolved run.  ``j`` (as a string like ``"3/2"``) and ``m_qubits`` are exclusive."""

    j: str | None = None
    m_qubits: int | None = None
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    qudit: tuple[complex, ...] = ()
    t: tuple[int, ...] = (100,)
    bins: int = 201
    grid: int = 201
    auto_normalize: bool = False
    preset: str | None = None
    out: str = "."

    @property
    def angles(self) -> EulerAngles:
        return EulerAngles(self.alpha, self.beta, self.gamma)

    @property
    def spin(self) -> HalfInt:
        return HalfInt.of(self.j)

    @property
    def tensor_mode(self) -> bool:
        return self.m_qubits is not None

    def to_json_dict(self, include_out: bool = True) -> dict:
        d = asdict(self)
        d["qudit"] = [[float(z.real), float(z.imag)] for z in self.qudit]
        d["t"] = list(self.t)
        if not include_out:
            d.pop("out")
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> RunConfig:
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(extra))}")
        d = dict(d)
        if "qudit" in d:
            d["qudit"] = tuple(complex(re_, im) for re_, im in d["qudit"])
        if "t" in d:
            d["t"] = tuple(int(v) for v in d["t"])
        return cls(**d)

    def validate(self) -> RunConfig:
        if (self.j is None) == (self.m_qubits is None):
            raise ConfigError("give exactly one of --j and --m-qubits")
        if self.j is not None:
            try:
                j = HalfInt.of(self.j)
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigError(f"bad spin {self.j!r}: {exc}") from None
            if j.twice < 0:
                raise ConfigError(f"spin must be non-negative, got {self.j}")
            expected = j.dim
        else:
            if self.m_qubits not in SUPPORTED_M:
                raise ConfigError(f"--m-qubits must be one of {SUPPORTED_M}, got {self.m_qubits}")
            expected = 2 * self.m_qubits
        if len(self.qudit) != expected:
            raise ConfigError(f"qudit needs {expected} entries, got {len(self.qudit)}")
        if not self.t or min(self.t) < 0:
            raise ConfigError("times must be a non-empty list of non-negative integers")
        if self.bins < 1 or self.grid < 1:
            raise ConfigError("--bins and --grid must be positive")
        for name in ("alpha", "beta", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} is not finite")
        groups = [self.qudit] if self.j is not None else [
            self.qudit[2 * n:2 * n + 2] for n in range(self.m_qubits)]
        for g in groups:
            norm2 = float(sum(abs(z) ** 2 for z in g))
            if abs(norm2 - 1.0) > CONFIG_NORM_TOL and not self.auto_normalize:
                raise ConfigError(f"qudit entries {g} have squared norm {norm2!r}; "
                                  "pass --auto-normalize to rescale")
            if norm2 == 0.0:
                raise ConfigError("qudit is zero")
        return self

    def walk_qudit(self) -> Qudit:
        norm2 = float(sum(abs(z) ** 2 for z in self.qudit))
        return Qudit(self.spin, self.qudit, normalize=abs(norm2 - 1.0) > 1e-12)

    def product_qudit(self) -> ProductQudit:
        pairs = [self.qudit[2 * n:2 * n + 2] for n in range(self.m_qubits)]
        return ProductQudit(pairs, normalize=True)


def _parse_times(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(v) for v in str(text).split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"times must be comma-separated integers, got {text!r}") from None
    return tuple(sorted(set(vals)))


def _explicit_overrides(args: argparse.Namespace) -> dict:
    out = {}
    if args.j is not None:
        out["j"] = str(HalfInt.of(args.j)) if _is_halfint(args.j) else args.j
        out["m_qubits"] = None
    if args.m_qubits is not None:
        out["m_qubits"] = args.m_qubits
        out["j"] = None
    for name in ("alpha", "beta", "gamma"):
        val = getattr(args, name)
        if val is not None:
            out[name] = parse_real(val)
    if args.qudit is not None:
        out["qudit"] = parse_complex_vector(args.qudit)
    if args.t is not None:
        out["t"] = _parse_times(args.t)
    for name in ("bins", "grid", "out"):
        val = getattr(args, name)
        if val is not None:
            out[name] = val
    if args.auto_normalize:
        out["auto_normalize"] = True
    return out


def _is_halfint(text: str) -> bool:
    try:
        HalfInt.of(text)
    except (ValueError, ZeroDivisionError):
        return False
    return True


def _preset_config(name: str) -> RunConfig:
    try:
        p = get_preset(name)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from None
    return RunConfig(j=str(p.j), alpha=p.angles.alpha, beta=p.angles.beta, gamma=p.angles.gamma,
                     qudit=p.amplitudes, preset=p.name)


def build_configs(args: argparse.Namespace) -> list[RunConfig]:
    """Resolve ``--config``, ``--preset`` and explicit flags (explicit flags win)."""
    base = RunConfig()
    if args.config:
        try:
            base = RunConfig.from_json_dict(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    overrides = _explicit_overrides(args)
    if not args.preset:
        cfg = replace(base, **overrides)
        return [cfg.validate()]
    names = list(PRESETS) if args.preset == "all" else [n.strip() for n in args.preset.split(",")]
    multi = len(names) > 1
    out = []
    for name in names:
        cfg = replace(_preset_config(name), t=base.t, bins=base.bins, grid=base.grid,
                      out=base.out)
        cfg = replace(cfg, **overrides)
        if multi:
            cfg = replace(cfg, out=str(Path(cfg.out) / name))
        out.append(cfg.validate())
    return out


# ---------------------------------------------------------------------------
# emitters


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return "%.17g" % float(v)


def _write_csv(path: Path, header: Sequence[str], rows, meta: dict | None = None) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        for key, val in (meta or {}).items():
            fh.write(f"# {key}: {json.dumps(val, sort_keys=True)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n")


def _span(cfg: RunConfig) -> float:
    return float(cfg.m_qubits) if cfg.tensor_mode else float(cfg.spin.twice)


def _simulate(cfg: RunConfig) -> dict[int, SiteDistribution]:
    if cfg.tensor_mode:
        return tensor_walk_distributions(cfg.m_qubits, cfg.angles, cfg.product_qudit(), cfg.t)
    coin = rotation_matrix(cfg.spin, cfg.angles)
    return evolve_distributions(cfg.walk_qudit(), coin, cfg.t)


def _density_rows(cfg: RunConfig, dist: SiteDistribution):
    if dist.t == 0:
        # the law of X_0 / 0 is taken as the point mass at the origin
        return [(0, 0.0, 0.0, 0.0, 1.0, None)]
    hist = pseudovelocity_histogram(dist, bins=cfg.bins, span=_span(cfg))
    return [(dist.t, lo, hi, y, m, d) for lo, hi, y, m, d in
            zip(hist.edges[:-1], hist.edges[1:], hist.centers, hist.mass, hist.density)]


def cmd_simulate(cfg: RunConfig) -> dict:
    """Write ``sites.csv`` (P(x, t)) and ``density.csv`` (binned law of X_t / t)."""
    out = Path(cfg.out)
    dists = _simulate(cfg)
    meta = {"config": cfg.to_json_dict(include_out=False)}
    site_rows, dens_rows = [], []
    for t in sorted(dists):
        d = dists[t]
        site_rows.extend((t, x, p) for x, p in zip(d.sites, d.probabilities))
        dens_rows.extend(_density_rows(cfg, d))
    _write_csv(out / "sites.csv", ["t", "x", "probability"], site_rows, meta)
    _write_csv(out / "density.csv", ["t", "y_lo", "y_hi", "y", "mass", "density"], dens_rows, meta)
    return {"files": ["sites.csv", "density.csv"],
            "total_probability": {t: dists[t].total() for t in sorted(dists)}}


def _chi_route_moment(cfg: RunConfig, r: int) -> float:
    q = cfg.walk_qudit()
    return sum(limit_moment_integral(cfg.spin, m, r, cfg.angles, q) for m in positive_modes(cfg.spin))


def _mode_summary(cfg: RunConfig, dist: LimitDistribution) -> list[dict]:
    modes = []
    aa = abs(dist.a)
    for mode in dist.modes:
        entry = {"m": str(mode.m)}
        if mode.polynomial is not None:
            entry["coefficients"] = [float(c) for c in mode.polynomial.coefficients]
        else:
            # interior grid, the weights are only defined on the open support
            x = np.linspace(-aa, aa, cfg.grid + 2)[1:-1]
            entry["x"] = x.tolist()
            entry["weight"] = np.asarray(mode(x), dtype=float).tolist()
        modes.append(entry)
    return modes


def _limit_law(cfg: RunConfig) -> LimitDistribution:
    if cfg.tensor_mode:
        raise ConfigError("limit laws are computed for a single spin; use --j")
    return limit_distribution(cfg.spin, cfg.angles, cfg.walk_qudit())


def _checked_moments(cfg: RunConfig, dist: LimitDistribution) -> tuple[dict, dict]:
    moments = {r: dist.moment(r) for r in range(MAX_MOMENT + 1)}
    if abs(moments[0] - 1.0) > MASS_TOL:
        raise ConsistencyError(f"limit law has total mass {moments[0]!r}")
    chi = {}
    if dist.modes:
        for r in range(1, MAX_MOMENT + 1):
            chi[r] = _chi_route_moment(cfg, r)
            if abs(chi[r] - moments[r]) > ROUTE_TOL:
                raise ConsistencyError(
                    f"moment r={r}: {moments[r]!r} from the density, {chi[r]!r} from the orbit integral")
    return moments, chi


def cmd_limit(cfg: RunConfig) -> dict:
    """Write ``limit.csv`` (continuous density on a grid) and ``limit.json``."""
    out = Path(cfg.out)
    dist = _limit_law(cfg)
    moments, chi = _checked_moments(cfg, dist)
    rows = []
    if dist.modes:
        s = dist.support
        edges = np.linspace(-s, s, cfg.grid + 1)
        masses = dist.cell_masses(edges)
        centers = 0.5 * (edges[1:] + edges[:-1])
        widths = np.diff(edges)
        rows = list(zip(edges[:-1], edges[1:], centers, masses / widths,
                        dist.density(centers), masses))
    meta = {"config": cfg.to_json_dict(include_out=False), "delta_weight": dist.delta_weight}
    _write_csv(out / "limit.csv", ["y_lo", "y_hi", "y", "density", "point_density", "cell_mass"],
               rows, meta)
    summary = {
        "config": cfg.to_json_dict(include_out=False),
        "j": str(dist.j),
        "a": dist.a,
        "support": dist.support,
        "modes": _mode_summary(cfg, dist),
        "delta_weight": dist.delta_weight,
        "continuous_mass": dist.continuous_mass(),
        "moments": moments,
        "moments_orbit_route": chi,
        "grid_mass": float(sum(r[-1] for r in rows)) + dist.delta_weight,
    }
    _write_json(out / "limit.json", summary)
    return {"files": ["limit.csv", "limit.json"], "delta_weight": dist.delta_weight}


def cmd_compare(cfg: RunConfig) -> dict:
    """Simulated and limit densities on the histogram grid plus moment gaps."""
    if cfg.tensor_mode:
        raise ConfigError("compare needs a single spin; use --j")
    if min(cfg.t) < 1:
        raise ConfigError("compare needs times t >= 1")
    out = Path(cfg.out)
    warnings = []
    try:
        dist = _limit_law(cfg)
    except DegenerateCoinError as exc:
        msg = f"limit side skipped: {exc}"
        log.warning(msg)
        warnings.append(msg)
        dist = None
    sims = _simulate(cfg)
    times = sorted(sims)
    span = _span(cfg)
    hists = {t: pseudovelocity_histogram(sims[t], bins=cfg.bins, span=span) for t in times}
    edges = hists[times[0]].edges
    centers = hists[times[0]].centers
    limit_cols = [None] * centers.size
    moments = {}
    if dist is not None:
        moments, _ = _checked_moments(cfg, dist)
        limit_cols = dist.cell_masses(edges) / np.diff(edges)
    rows = []
    for i in range(centers.size):
        rows.append((edges[i], edges[i + 1], centers[i], limit_cols[i],
                     *(hists[t].density[i] for t in times)))
    header = ["y_lo", "y_hi", "y", "limit_density", *(f"sim_density_t{t}" for t in times)]
    meta = {"config": cfg.to_json_dict(include_out=False),
            "delta_weight": None if dist is None else dist.delta_weight}
    _write_csv(out / "compare.csv", header, rows, meta)
    gaps = {}
    for t in times:
        gaps[t] = {}
        for r in range(1, MAX_MOMENT + 1):
            sim = pseudovelocity_moment(sims[t], r)
            entry = {"simulated": sim}
            if dist is not None:
                entry["limit"] = moments[r]
                entry["gap"] = abs(sim - moments[r])
            gaps[t][r] = entry
    summary = {
        "config": cfg.to_json_dict(include_out=False),
        "delta_weight": None if dist is None else dist.delta_weight,
        "limit_moments": moments,
        "moment_gaps": gaps,
        "warnings": warnings,
    }
    _write_json(out / "compare.json", summary)
    return {"files": ["compare.csv", "compare.json"], "warnings": warnings}


def cmd_reduce(cfg: RunConfig) -> dict:
    """Block decomposition of a product qudit and the direct-vs-blocks deviation."""
    if not cfg.tensor_mode:
        raise ConfigError("reduce needs --m-qubits")
    out = Path(cfg.out)
    q = cfg.product_qudit()
    dec = decompose_initial(cfg.m_qubits, q)
    t_max = max(cfg.t)
    dev = decomposition_deviation(cfg.m_qubits, cfg.angles, q, t_max)
    blocks = [{
        "j": str(b.j),
        "ell": b.ell,
        "weight": b.weight,
        "qudit": None if b.qudit is None else [[z.real, z.imag] for z in b.qudit.amplitudes],
    } for b in dec.blocks]
    summary = {
        "config": cfg.to_json_dict(include_out=False),
        "M": cfg.m_qubits,
        "blocks": blocks,
        "total_weight": dec.total_weight(),
        "t_max": t_max,
        "max_deviation": dev,
    }
    _write_json(out / "reduce.json", summary)
    if dev > REDUCE_TOL:
        raise ConsistencyError(f"direct and block-summed laws differ by {dev:.3e}")
    return {"files": ["reduce.json"], "max_deviation": dev}


COMMANDS: dict[str, Callable[[RunConfig], dict]] = {
    "simulate": cmd_simulate,
    "limit": cmd_limit,
    "compare": cmd_compare,
    "reduce": cmd_reduce,
}


def _run_one(command: str, cfg: RunConfig) -> tuple[int, str]:
    try:
        Path(cfg.out).mkdir(parents=True, exist_ok=True)
        _write_json(Path(cfg.out) / "config.json", cfg.to_json_dict())
        info = COMMANDS[command](cfg)
    except DegenerateCoinError as exc:
        return EXIT_DEGENERATE, str(exc)
    except DegenerateAngleError as exc:
        return EXIT_DEGENERATE, f"{exc}; perturb the wave number or the coin angles"
    except ConsistencyError as exc:
        return EXIT_CONSISTENCY, str(exc)
    except (ConfigError, DomainError) as exc:
        return EXIT_CONFIG, str(exc)
    label = cfg.preset or cfg.out
    return EXIT_OK, f"{command} {label}: wrote {', '.join(info['files'])} to {cfg.out}"


def _list_presets() -> str:
    lines = []
    for p in PRESETS.values():
        lines.append(f"{p.name}  j={p.j}  angles=({', '.join(p.angle_exprs)})  "
                     f"qudit={p.qudit_expr}  # {p.description}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wignerwalk",
                                     description="Quantum walks with Wigner rotation coins.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("simulate", "evolve the walk and bin X_t/t"),
                           ("limit", "tabulate the limit law"),
                           ("compare", "simulation against the limit law"),
                           ("reduce", "block decomposition of a qubit-product walk")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--j", help="spin, e.g. 1/2, 1, 3/2")
        p.add_argument("--m-qubits", type=int, help="number of qubit factors (2 or 3)")
        p.add_argument("--alpha", help="angle expression, e.g. -3pi/2")
        p.add_argument("--beta")
        p.add_argument("--gamma")
        p.add_argument("--qudit", help="comma-separated complex amplitudes q_j ... q_-j")
        p.add_argument("--t", help="comma-separated times")
        p.add_argument("--bins", type=int, help="histogram bins (default 201)")
        p.add_argument("--grid", type=int, help="limit-density cells (default 201)")
        p.add_argument("--out", help="output directory (default .)")
        p.add_argument("--preset", help="preset name, comma list, or 'all'")
        p.add_argument("--auto-normalize", action="store_true")
        p.add_argument("--jobs", type=int, default=1, help="parallel preset runs")
        p.add_argument("--config", help="JSON config written by --dump-config")
        p.add_argument("--dump-config", help="write the resolved config to this JSON file")
    sub.add_parser("presets", help="list built-in configurations")
    return parser


# flags whose values may legitimately start with '-' (e.g. "-3pi/2")
_EXPR_FLAGS = frozenset({"--alpha", "--beta", "--gamma", "--qudit"})


def _attach_expression_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--beta -3pi/2`` as ``--beta=-3pi/2`` so argparse keeps the value."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _EXPR_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_attach_expression_values(argv))
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    if args.command == "presets":
        print(_list_presets())
        return EXIT_OK
    try:
        configs = build_configs(args)
        if args.dump_config:
            if len(configs) != 1:
                raise ConfigError("--dump-config needs a single run")
            _write_json(Path(args.dump_config), configs[0].to_json_dict())
    except (ConfigError, DomainError) as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    jobs = max(1, args.jobs)
    if jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, [args.command] * len(configs), configs))
    else:
        results = [_run_one(args.command, cfg) for cfg in configs]
    code = EXIT_OK
    for rc, msg in results:
        if rc == EXIT_OK:
            print(msg)
        else:
            log.error("%s", msg)
            code = max(code, rc)
    return code


if __name__ == "__main__":
    sys.exit(main())
