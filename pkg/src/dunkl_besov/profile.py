"""Verification profiles: parameter sets, grid settings and frozen ceilings.

A check id is ``<base>`` or ``<base>[<cell>]``.  Its ceiling is looked up
under the full id first and then under the base id, so a profile can
freeze one constant per cell or one constant for all cells.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

from .catalog import CATALOG
from .errors import DomainError
from .special import as_alpha

SUITES = ("S1", "S2", "S3", "S4", "S5", "S6")

# base id -> (suite, anchor)
CHECKS: dict[str, tuple[str, str]] = {
    "S1.kernel_bound": ("S1", "|E_a(-ixy)| <= 1"),
    "S1.bessel_regimes": ("S1", "j_a series = j_a large-argument branch at the switch"),
    "S1.plancherel": ("S1", "||F_a f||_{2,a} = ||f||_{2,a}"),
    "S1.sup_bound": ("S1", "||F_a f||_inf <= ||f||_{1,a}"),
    "S1.inversion": ("S1", "f(x) = int E_a(i lam x) F_a f(lam) dmu_a(lam)"),
    "S1.gaussian_oracle": ("S1", "F_a f(lam) = int E_a(-i lam y) f(y) dmu_a(y) (4x-resolution oracle)"),
    "S1.gaussian_fixed_point": ("S1", "F_a(exp(-x^2/2))(lam) = exp(-lam^2/2)"),
    "S1.tail_plancherel": ("S1", "int_{|lam|>x} |F_a f|^2 dmu_a = ||f - P_x f||_{2,a}^2"),
    "S1.tail_inequality": ("S1", "||f - P_x f||_{2,a} restricted to [-R,R] <= (int_{|lam|>x} |F_a f|^2 dmu_a)^(1/2)"),
    "S2.nu_mass": ("S2", "int_0^pi dnu_a(theta) = 1/2"),
    "S2.tau_zero": ("S2", "tau_0 f = f"),
    "S2.symmetry": ("S2", "tau_x f(y) = tau_y f(x)"),
    "S2.boundedness": ("S2", "||tau_x f||_{p,a} <= 4 ||f||_{p,a}"),
    "S2.multiplier": ("S2", "F_a(tau_x f)(lam) = E_a(i lam x) F_a f(lam)"),
    "S2.kernel_crosscheck": ("S2", "tau_x f(y) = int f(z) dgamma_{x,y}(z)"),
    "S2.kernel_abs_mass": ("S2", "int |W_a(x,y,z)| dmu_a(z) <= 4"),
    "S2.kernel_scaling": ("S2", "W_a(xy,xz,xt) x^(2a+2) = W_a(y,z,t)"),
    "S2.kernel_symmetry": ("S2", "W_a(x,y,z) = W_a(y,x,z)"),
    "S2.translate_one": ("S2", "tau_x 1 = 1"),
    "S2.commutation": ("S2", "Lambda_a tau_x = tau_x Lambda_a"),
    "S2.semigroup": ("S2", "tau_x tau_y = tau_y tau_x"),
    "S2.bessel_oracle": ("S2", "even part of tau_y h = (1/c_a) int_0^pi h((x,y)_theta) sin^(2a) theta dtheta"),
    "S3.commutativity": ("S3", "f *_a g = g *_a f"),
    "S3.young": ("S3", "||f *_a g||_{r,a} <= 4 ||f||_{p,a} ||g||_{q,a}"),
    "S3.transform_product": ("S3", "F_a(f *_a g) = F_a f F_a g"),
    "S3.exchange": ("S3", "tau_t(f *_a g) = tau_t f *_a g = f *_a tau_t g"),
    "S4.theta_mass": ("S4", "int_{-x}^{x} Theta(x,z) dmu_a(z) = x / (2^(a+2) Gamma(a+2))"),
    "S4.taylor": ("S4", "tau_x f - f = int_{-x}^{x} Theta(x,z) tau_z(Lambda_a f) |z|^(2a+1) dz"),
    "S4.reconstruction": ("S4", "f = f0 + 2^(a+2) Gamma(a+2) f1"),
    "S4.closed_form": ("S4", "Lambda_a f1_scaled = 2(a+1) (tau_x f - f) / x"),
    "S4.parity_flip": ("S4", "Lambda_a maps even to odd and odd to even"),
    "S4.annihilates_constants": ("S4", "Lambda_a 1 = 0"),
    "S4.sandwich_upper": ("S4", "K_{p,a}(f,x) <= c w_{p,a}(f,x)"),
    "S4.sandwich_lower": ("S4", "w_{p,a}(f,x) <= c K_{p,a}(f,x)"),
    "S5.lemma1": ("S5", "||tau_y1 h - tau_y2 h||_{p,a} <= c |y1 - y2| ||h'||_{p,a}"),
    "S5.lemma1_halving": ("S5", "||tau_y1 h - tau_y2 h||_{p,a} <= c |y1 - y2| ||h'||_{p,a} (halved |y1 - y2|)"),
    "S5.lemma2": ("S5", "||tau_y1 g - tau_y2 g||_{p,a} <= c x |y1 - y2| ||g||_{p,a}, supp F_a g in [-x,x]"),
    "S5.lemma2_halving": ("S5", "||tau_y1 g - tau_y2 g||_{p,a} <= c x |y1 - y2| ||g||_{p,a} (halved |y1 - y2|)"),
    "S6.w_scaling": ("S6", "w_{p,a}(f, lam x) <= c max(1, lam) w_{p,a}(f, x)"),
    "S6.sample_doubling": ("S6", "w_{p,a}(f,x) = sup_{|t|<=x} ||tau_t f - f||_{p,a} (lattice refinement)"),
    "S6.thm1": ("S6", "BD = KD"),
    "S6.thm2": ("S6", "(int_1^inf (t^b E_{p,a}(f,t))^q dt/t)^(1/q) <= c (int_0^inf (w_{p,a}(f,t)/t^b)^q dt/t)^(1/q)"),
    "S6.mollifier_bound": ("S6", "||f - f *_a phi_{1/t}||_{p,a} <= c w_{p,a}(f, 1/t)"),
    "S6.thm3": ("S6", "(int_0^inf (t^-b w_{p,a}(f,t))^q dt/t)^(1/q) <= c (||f||_p + (int_1^inf (t^b E_{p,a}(f,t))^q dt/t)^(1/q))"),
    "S6.e_monotone": ("S6", "E_{p,a}(f,t) is nonincreasing in t"),
    "S6.not_applicable": ("S6", "ED in BD requires 0 < b < 1"),
    "S6.degenerate": ("S6", "seminorms vanish on constants"),
    "S6.reflection": ("S6", "seminorms of f(-x) equal those of f(x)"),
    "S6.mollifier_mass": ("S6", "int phi dmu_a = 1"),
    "S6.mollifier_leakage": ("S6", "supp F_a phi in [-1, 1]"),
    "S6.dilation_mass": ("S6", "phi_{1/t}(x) = t^(2a+2) phi(t x) keeps int dmu_a = 1"),
    "S6.dilation_band": ("S6", "supp F_a phi_{1/t} in [-t, t]"),
}


def base_id(check_id: str) -> str:
    return check_id.split("[", 1)[0]


def cell_id(base: str, **cell) -> str:
    if not cell:
        return base
    return base + "[" + ",".join(f"{k}={_fmt(v)}" for k, v in cell.items()) + "]"


def _fmt(v) -> str:
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, float) and v.is_integer():
        return str(int(v))
    return str(v)


def _q(v) -> float:
    return math.inf if v in ("inf", "Infinity", math.inf) else float(v)


@dataclass
class VerifyProfile:
    alpha_set: list
    p_set: list
    q_set: list
    beta_set: list
    scale_set: dict
    tolerances: dict
    grid_config: dict
    catalog: list = field(default_factory=lambda: list(CATALOG))
    suites: list = field(default_factory=lambda: list(SUITES))
    seed: int = 20240101
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        # alpha > -1/2 is enforced here, before any suite runs
        self.alpha_set = [as_alpha(a).alpha for a in self.alpha_set]
        self.p_set = [float(p) for p in self.p_set]
        self.q_set = [_q(q) for q in self.q_set]
        self.beta_set = [float(b) for b in self.beta_set]
        if any(p < 1 for p in self.p_set):
            raise DomainError("p_set entries must be >= 1")
        if any(q < 1 for q in self.q_set):
            raise DomainError("q_set entries must be >= 1")
        if any(not b > 0 for b in self.beta_set):
            raise DomainError("beta_set entries must be positive")
        unknown = [n for n in self.catalog if n not in CATALOG]
        if unknown:
            raise DomainError(f"unknown catalog functions: {unknown}")
        bad = [s for s in self.suites if s not in SUITES]
        if bad:
            raise DomainError(f"unknown suites: {bad}")
        for key, val in self.tolerances.items():
            if base_id(key) not in CHECKS:
                raise DomainError(f"tolerance {key!r} does not name a known check")
            if not (isinstance(val, (int, float)) and val >= 0):
                raise DomainError(f"tolerance {key!r} must be a nonnegative number")
        g = self.grid_config
        for k in ("radius", "n", "theta_nodes"):
            if k not in g:
                raise DomainError(f"grid_config lacks {k!r}")

    @property
    def radius(self) -> float:
        return float(self.grid_config["radius"])

    @property
    def n(self) -> int:
        return int(self.grid_config["n"])

    @property
    def theta_nodes(self) -> int:
        return int(self.grid_config["theta_nodes"])

    def ceiling(self, check_id: str) -> float:
        if check_id in self.tolerances:
            return float(self.tolerances[check_id])
        b = base_id(check_id)
        if b in self.tolerances:
            return float(self.tolerances[b])
        raise DomainError(f"no ceiling configured for check {check_id!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["q_set"] = ["inf" if math.isinf(q) else q for q in self.q_set]
        return d

    def digest(self) -> str:
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    def with_overrides(self, **kw) -> "VerifyProfile":
        d = self.to_dict()
        for k, v in kw.items():
            if v is None:
                continue
            if k in ("radius", "n", "theta_nodes"):
                d["grid_config"][k] = v
            else:
                d[k] = v
        return VerifyProfile(**d)


def load_profile(path=None) -> VerifyProfile:
    if path is None:
        text = resources.files("dunkl_besov").joinpath("profiles/default.json").read_text()
    else:
        text = Path(path).read_text()
    data = json.loads(text)
    try:
        return VerifyProfile(**data)
    except TypeError as exc:
        raise DomainError(f"malformed profile: {exc}") from None


__all__ = ["SUITES", "CHECKS", "VerifyProfile", "load_profile", "base_id", "cell_id"]
