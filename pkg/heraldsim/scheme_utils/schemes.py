"""
Heralding circuits, the run pipeline and loss sweeps.

A circuit is a declarative list of Gaussian operations applied to vacuum,
followed by photon counting on every mode except the heralded one. Loss
transmissions may be left open as the placeholders ``"eta1"`` and ``"eta2"``;
such a template is turned into a runnable circuit by ``CircuitSpec.bind``.
"""

import cmath
import logging
import math
import time
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from heraldsim.config import DEFAULT_D_MAX, DEFAULT_REL_TOL
from heraldsim.exceptions import InvalidParameterException
from heraldsim.fock_utils.fock_extract import HeraldResult, herald_adaptive
from heraldsim.merit_utils.merits import fidelity
from heraldsim.merit_utils.targets import (
    PureTarget,
    target_cat,
    target_fock,
    target_psia,
)
from heraldsim.merit_utils.wigner import WLNQuadrature, wln
from heraldsim.state_utils import gaussian_core
from heraldsim.state_utils.gaussian_core import GaussianState

from . import (
    CAT_BS_THETA,
    CUBIC_LOSS_MODES,
    CUBIC_MESHES,
    ETA_PLACEHOLDERS,
    MIN_TARGET_CUTOFF,
    TARGET_KINDS,
    cat_alpha_opt,
    cubic_parameters,
    op_signatures,
    preset_defaults,
)

Eta = Union[float, str]

_APPLY: Dict[str, Callable[..., GaussianState]] = {
    "squeeze": lambda s, modes, p: gaussian_core.squeeze(s, modes[0], p["z"]),
    "two_mode_squeeze": lambda s, modes, p: gaussian_core.two_mode_squeeze(
        s, modes[0], modes[1], p["zeta"]
    ),
    "beamsplitter": lambda s, modes, p: gaussian_core.beamsplitter(
        s, modes[0], modes[1], p["theta"], p["phi"]
    ),
    "displace": lambda s, modes, p: gaussian_core.displace(s, modes[0], p["alpha"]),
    "loss": lambda s, modes, p: gaussian_core.loss(s, modes[0], p["eta"]),
}


@dataclass(frozen=True)
class CircuitOp:
    """
    One Gaussian operation of a circuit.

    Attributes
    ----------
    kind : str
        one of squeeze, two_mode_squeeze, beamsplitter, displace, loss
    modes : Tuple[int, ...]
        1-based modes the operation acts on
    params : Dict[str, Any]
        z, zeta, (theta, phi), alpha or eta; a loss eta may be a placeholder
    """

    kind: str
    modes: Tuple[int, ...]
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        """Validate the operation."""
        object.__setattr__(self, "modes", tuple(int(k) for k in self.modes))
        if self.kind not in op_signatures:
            raise InvalidParameterException(
                f"unknown operation {self.kind!r}; expected one of {list(op_signatures)}"
            )
        num_modes, names = op_signatures[self.kind]
        if len(self.modes) != num_modes:
            raise InvalidParameterException(
                f"{self.kind} acts on {num_modes} mode(s), got {self.modes}"
            )
        if len(set(self.modes)) != len(self.modes):
            raise InvalidParameterException(f"{self.kind} needs distinct modes")
        if set(self.params) != set(names):
            raise InvalidParameterException(
                f"{self.kind} takes parameters {names}, got {sorted(self.params)}"
            )
        if self.kind == "loss":
            eta = self.params["eta"]
            if isinstance(eta, str):
                if eta not in ETA_PLACEHOLDERS:
                    raise InvalidParameterException(
                        f"loss placeholder must be one of {ETA_PLACEHOLDERS}, got {eta!r}"
                    )
            elif not 0.0 <= eta <= 1.0:
                raise InvalidParameterException(f"eta must lie in [0, 1], got {eta}")

    @property
    def placeholder(self) -> Optional[str]:
        """Name of the open transmission, None when the operation is concrete."""
        eta = self.params.get("eta")
        return eta if isinstance(eta, str) else None

    def bind(self, etas: Dict[str, float]) -> "CircuitOp":
        """Replace an open transmission by its value in ``etas``."""
        if self.placeholder is None:
            return self
        return CircuitOp(self.kind, self.modes, {"eta": float(etas[self.placeholder])})

    def apply(self, state: GaussianState) -> GaussianState:
        """Apply the operation to ``state``."""
        if self.placeholder is not None:
            raise InvalidParameterException(
                f"loss on mode {self.modes[0]} is still the placeholder {self.placeholder!r}"
            )
        return _APPLY[self.kind](state, self.modes, self.params)


@dataclass(frozen=True)
class TargetSpec:
    """
    Description of the pure state a heralded output is compared against.

    Attributes
    ----------
    kind : str
        fock (m), cat (alpha, parity), psia (a) or vacuum
    params : Dict[str, Any]
        parameters of the target
    """

    kind: str
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        """Validate the target description."""
        required = {"fock": {"m"}, "cat": {"alpha", "parity"}, "psia": {"a"}, "vacuum": set()}
        if self.kind not in TARGET_KINDS:
            raise InvalidParameterException(
                f"unknown target {self.kind!r}; expected one of {TARGET_KINDS}"
            )
        if set(self.params) != required[self.kind]:
            raise InvalidParameterException(
                f"{self.kind} target takes {sorted(required[self.kind])}, "
                f"got {sorted(self.params)}"
            )
        if self.kind == "fock" and int(self.params["m"]) < 0:
            raise InvalidParameterException(
                f"Fock target needs m >= 0, got {self.params['m']}"
            )

    @property
    def min_cutoff(self) -> int:
        """Smallest cutoff on which the target can be represented."""
        if self.kind == "fock":
            return int(self.params["m"]) + 1
        if self.kind == "psia":
            return 4
        return 1

    def build(self, cutoff: int) -> PureTarget:
        """Amplitudes of the target on max(cutoff, min_cutoff) Fock levels."""
        cutoff = max(cutoff, self.min_cutoff)
        if self.kind == "fock":
            return target_fock(int(self.params["m"]), cutoff)
        if self.kind == "cat":
            return target_cat(complex(self.params["alpha"]), self.params["parity"], cutoff)
        if self.kind == "psia":
            return target_psia(float(self.params["a"]), cutoff)
        return target_fock(0, cutoff)


@dataclass(frozen=True)
class CircuitSpec:
    """
    A heralding circuit: operations on vacuum, a detection pattern and a target.

    Attributes
    ----------
    num_modes : int
        number of modes, at least 2
    ops : Tuple[CircuitOp, ...]
        operations in application order
    pattern : Tuple[int, ...]
        photon numbers detected on every mode but the heralded one, in mode order
    heralded_mode : int
        1-based mode left unmeasured
    target : TargetSpec
        state the output is scored against
    name : str
        label written to reports
    loss_mapping : str
        which physical channels eta1 and eta2 stand for
    eta1, eta2 : float
        transmissions recorded in the report
    """

    num_modes: int
    ops: Tuple[CircuitOp, ...]
    pattern: Tuple[int, ...]
    heralded_mode: int
    target: TargetSpec
    name: str = "custom"
    loss_mapping: str = ""
    eta1: float = 1.0
    eta2: float = 1.0

    def __post_init__(self):
        """Validate indices and the detection pattern."""
        object.__setattr__(self, "ops", tuple(self.ops))
        object.__setattr__(self, "pattern", tuple(int(n) for n in self.pattern))
        if self.num_modes < 2:
            raise InvalidParameterException(
                f"a heralding circuit needs at least two modes, got {self.num_modes}"
            )
        for op in self.ops:
            if any(not 1 <= k <= self.num_modes for k in op.modes):
                raise InvalidParameterException(
                    f"{op.kind} on modes {op.modes} is outside 1..{self.num_modes}"
                )
        if not 1 <= self.heralded_mode <= self.num_modes:
            raise InvalidParameterException(
                f"heralded mode {self.heralded_mode} is outside 1..{self.num_modes}"
            )
        if len(self.pattern) != self.num_modes - 1 or min(self.pattern) < 0:
            raise InvalidParameterException(
                f"pattern {self.pattern} must give a nonnegative count for each of the "
                f"{self.num_modes - 1} detected modes"
            )

    @property
    def detected_modes(self) -> List[int]:
        """Measured modes in increasing order."""
        return [k for k in range(1, self.num_modes + 1) if k != self.heralded_mode]

    @property
    def open_losses(self) -> List[str]:
        """Placeholders still to be bound, in order of first use."""
        names = [op.placeholder for op in self.ops if op.placeholder is not None]
        return list(dict.fromkeys(names))

    def bind(self, eta1: float, eta2: float) -> "CircuitSpec":
        """
        bind fills the loss placeholders with concrete transmissions.

        Parameters
        ----------
        eta1, eta2 : float
            transmissions in [0, 1]

        Returns
        -------
        CircuitSpec
            a runnable circuit that records eta1 and eta2
        """
        etas = {"eta1": eta1, "eta2": eta2}
        ops = tuple(op.bind(etas) for op in self.ops)
        return replace(self, ops=ops, eta1=float(eta1), eta2=float(eta2))


@dataclass(frozen=True)
class MeritReport:
    """
    Figures of merit of one circuit run.

    Attributes
    ----------
    eta1, eta2 : float
        transmissions of the run
    p : float
        heralding probability
    F : float
        fidelity to the target
    wln : float
        Wigner logarithmic negativity of the heralded state
    d_used : int
        Fock cutoff of the heralded state
    wall_time : float
        seconds spent, ignored when reports are compared
    """

    eta1: float
    eta2: float
    p: float
    F: float
    wln: float
    d_used: int
    wall_time: float = field(default=0.0, compare=False)

    def to_dict(self) -> Dict[str, Any]:
        """Report as a flat dict with the timing stored under ``seconds``."""
        row = asdict(self)
        row["seconds"] = row.pop("wall_time")
        return row


def _eta_value(eta: Eta) -> float:
    return 1.0 if isinstance(eta, str) else float(eta)


def scheme_fock(r: float, eta1: Eta, eta2: Eta, m: int) -> CircuitSpec:
    """
    scheme_fock builds the two-mode squeezed vacuum Fock state source.

    Parameters
    ----------
    r : float
        two-mode squeezing parameter
    eta1, eta2 : Eta
        transmission of the detected mode 1 and of the heralded mode 2,
        or placeholders
    m : int
        photons detected in mode 1; the target is |m>

    Returns
    -------
    CircuitSpec
        the circuit
    """
    ops = (
        CircuitOp("two_mode_squeeze", (1, 2), {"zeta": r}),
        CircuitOp("loss", (1,), {"eta": eta1}),
        CircuitOp("loss", (2,), {"eta": eta2}),
    )
    return CircuitSpec(
        num_modes=2,
        ops=ops,
        pattern=(m,),
        heralded_mode=2,
        target=TargetSpec("fock", {"m": m}),
        name="fock",
        loss_mapping="eta1: mode 1 (detected); eta2: mode 2 (heralded)",
        eta1=_eta_value(eta1),
        eta2=_eta_value(eta2),
    )


def lossless_fock_probability(r: float, m: int) -> float:
    """p_m = <n>^m / (1 + <n>)^(m + 1) with <n> = sinh(r)^2."""
    if m < 0:
        raise InvalidParameterException(f"m must be nonnegative, got {m}")
    nbar = math.sinh(r) ** 2
    return nbar**m / (1.0 + nbar) ** (m + 1)


def scheme_cat(
    z: complex, eta1: Eta, eta2: Eta, m: int, alpha: Optional[complex] = None
) -> CircuitSpec:
    """
    scheme_cat builds the photon subtraction cat state source.

    Squeezed vacuum in mode 1 loses photons through L(eta1), a weak beamsplitter
    with cos(theta) = sqrt(0.97) taps light into mode 2, which passes L(eta2) and
    is detected with m photons.

    Parameters
    ----------
    z : complex
        squeezing of mode 1
    eta1, eta2 : Eta
        transmission after the squeezer and before the detector
    m : int
        subtracted photons; odd m targets an odd cat, even m an even cat
    alpha : Optional[complex], optional
        cat amplitude of the target; by default the tabulated optimum for m,
        rotated along the anti-squeezed quadrature

    Returns
    -------
    CircuitSpec
        the circuit
    """
    if m < 1:
        raise InvalidParameterException(f"at least one photon must be subtracted, got {m}")
    if alpha is None:
        if m not in cat_alpha_opt:
            raise InvalidParameterException(
                f"no tabulated cat amplitude for m={m}; pass alpha explicitly"
            )
        alpha = cat_alpha_opt[m] * cmath.exp(0.5j * (cmath.phase(z) + math.pi))
    ops = (
        CircuitOp("squeeze", (1,), {"z": z}),
        CircuitOp("loss", (1,), {"eta": eta1}),
        CircuitOp("beamsplitter", (1, 2), {"theta": CAT_BS_THETA, "phi": 0.0}),
        CircuitOp("loss", (2,), {"eta": eta2}),
    )
    return CircuitSpec(
        num_modes=2,
        ops=ops,
        pattern=(m,),
        heralded_mode=1,
        target=TargetSpec("cat", {"alpha": complex(alpha), "parity": "odd" if m % 2 else "even"}),
        name="cat",
        loss_mapping="eta1: mode 1 after the squeezer; eta2: mode 2 (detected)",
        eta1=_eta_value(eta1),
        eta2=_eta_value(eta2),
    )


def scheme_cubic(
    a_target: float, eta1: Eta, eta2: Eta, mesh: str = "b12_b23_b12"
) -> CircuitSpec:
    """
    scheme_cubic builds the three-mode weak cubic-phase state source.

    Each mode starts as a displaced squeezed state D(alpha_k) S(z_k)|0>. Inputs 1
    and 2 pass the preparation loss L(eta2), then the three beamsplitters of
    ``mesh`` act and every output passes the measurement loss L(eta1). Modes 1
    and 2 count (1, 2) photons and mode 3 is heralded.

    Parameters
    ----------
    a_target : float
        parameter a of the target psi_a
    eta1, eta2 : Eta
        measurement side (all outputs) and preparation side (inputs 1, 2)
        transmissions
    mesh : str, optional
        beamsplitter ordering, one of CUBIC_MESHES, by default "b12_b23_b12"

    Returns
    -------
    CircuitSpec
        the circuit
    """
    if mesh not in CUBIC_MESHES:
        raise InvalidParameterException(
            f"unknown mesh {mesh!r}; expected one of {list(CUBIC_MESHES)}"
        )
    ops = []
    for k in range(3):
        z = cubic_parameters["r"][k] * cmath.exp(1j * cubic_parameters["arg_z"][k])
        ops.append(CircuitOp("squeeze", (k + 1,), {"z": z}))
        ops.append(CircuitOp("displace", (k + 1,), {"alpha": cubic_parameters["alpha"][k]}))
    ops += [CircuitOp("loss", (k,), {"eta": eta2}) for k in CUBIC_LOSS_MODES["eta2"]]
    for pair, theta, phi in zip(
        CUBIC_MESHES[mesh], cubic_parameters["theta"], cubic_parameters["phi"]
    ):
        ops.append(CircuitOp("beamsplitter", pair, {"theta": theta, "phi": phi}))
    ops += [CircuitOp("loss", (k,), {"eta": eta1}) for k in CUBIC_LOSS_MODES["eta1"]]
    return CircuitSpec(
        num_modes=3,
        ops=tuple(ops),
        pattern=cubic_parameters["pattern"],
        heralded_mode=3,
        target=TargetSpec("psia", {"a": a_target}),
        name="cubic",
        loss_mapping="eta1: modes 1, 2, 3 after the mesh; eta2: inputs 1, 2 after preparation",
        eta1=_eta_value(eta1),
        eta2=_eta_value(eta2),
    )


PRESETS: Dict[str, Callable[..., CircuitSpec]] = {
    "fock": lambda eta1, eta2, r, m: scheme_fock(r, eta1, eta2, m),
    "cat": lambda eta1, eta2, z, m, alpha=None: scheme_cat(z, eta1, eta2, m, alpha),
    "cubic": lambda eta1, eta2, a, mesh: scheme_cubic(a, eta1, eta2, mesh),
}


def preset(name: str, eta1: Eta = "eta1", eta2: Eta = "eta2", **overrides: Any) -> CircuitSpec:
    """
    preset builds a named circuit with its published parameters.

    Parameters
    ----------
    name : str
        fock, cat or cubic
    eta1, eta2 : Eta, optional
        transmissions, left open by default
    **overrides
        replacements for the entries of ``preset_defaults[name]``

    Returns
    -------
    CircuitSpec
        the circuit, a template when a transmission is left open
    """
    if name not in PRESETS:
        raise InvalidParameterException(
            f"unknown preset {name!r}; expected one of {list(PRESETS)}"
        )
    accepted = set(preset_defaults[name]) | ({"alpha"} if name == "cat" else set())
    unknown = set(overrides) - accepted
    if unknown:
        raise InvalidParameterException(f"preset {name} does not take {sorted(unknown)}")
    params = {**preset_defaults[name], **overrides}
    return PRESETS[name](eta1, eta2, **params)


def build_state(spec: CircuitSpec) -> GaussianState:
    """Fold the circuit's operations over vacuum."""
    state = gaussian_core.vacuum(spec.num_modes)
    for op in spec.ops:
        state = op.apply(state)
    return state


def heralded_order_state(spec: CircuitSpec) -> GaussianState:
    """Pre-measurement state with the detected modes first and the heralded mode last."""
    state = build_state(spec)
    return gaussian_core.permute_modes(state, spec.detected_modes + [spec.heralded_mode])


def herald_state(
    spec: CircuitSpec, rel_tol: float = DEFAULT_REL_TOL, d_max: int = DEFAULT_D_MAX
) -> HeraldResult:
    """Herald the circuit's output state with an adaptive cutoff."""
    return herald_adaptive(
        heralded_order_state(spec), spec.pattern, rel_tol=rel_tol, d_max=d_max
    )


def run(
    spec: CircuitSpec,
    rel_tol: float = DEFAULT_REL_TOL,
    d_max: int = DEFAULT_D_MAX,
    quad: Optional[WLNQuadrature] = None,
) -> MeritReport:
    """
    run heralds a circuit and scores the output.

    Parameters
    ----------
    spec : CircuitSpec
        a circuit without open transmissions
    rel_tol : float, optional
        tolerance of the adaptive cutoff, by default DEFAULT_REL_TOL
    d_max : int, optional
        largest cutoff, by default DEFAULT_D_MAX
    quad : Optional[WLNQuadrature], optional
        WLN quadrature settings, by default WLNQuadrature()

    Returns
    -------
    MeritReport
        probability, fidelity, WLN and cutoff of the run
    """
    start = time.perf_counter()
    result = herald_state(spec, rel_tol, d_max)
    target = spec.target.build(max(result.d_used, MIN_TARGET_CUTOFF))
    if target.truncated:
        logging.warning(
            f"{spec.target.kind} target loses {target.truncation_loss:.2e} of its norm"
        )
    score = float(np.clip(fidelity(result.rho, target), 0.0, 1.0))
    negativity = wln(result.rho, quad)
    elapsed = time.perf_counter() - start
    logging.info(
        f"{spec.name} at eta1={spec.eta1:.4g}, eta2={spec.eta2:.4g}: p={result.probability:.6g}, "
        f"F={score:.6f}, wln={negativity:.6f} in {elapsed:.2f} s"
    )
    return MeritReport(
        eta1=spec.eta1,
        eta2=spec.eta2,
        p=float(min(result.probability, 1.0)),
        F=score,
        wln=negativity,
        d_used=result.d_used,
        wall_time=elapsed,
    )


def sweep(
    template: CircuitSpec,
    eta1_grid: Sequence[float],
    eta2_grid: Sequence[float],
    rel_tol: float = DEFAULT_REL_TOL,
    d_max: int = DEFAULT_D_MAX,
    threads: int = 1,
    quad: Optional[WLNQuadrature] = None,
) -> List[MeritReport]:
    """
    sweep runs a template over the Cartesian product of two transmission grids.

    Points are independent and dispatched to ``threads`` joblib workers; the
    reports come back row-major in eta1 then eta2 whatever the completion order.

    Parameters
    ----------
    template : CircuitSpec
        circuit with at least one open transmission
    eta1_grid, eta2_grid : Sequence[float]
        nonempty grids of transmissions
    rel_tol, d_max, quad
        passed on to ``run``
    threads : int, optional
        number of workers, by default 1

    Returns
    -------
    List[MeritReport]
        one report per grid point
    """
    if len(eta1_grid) == 0 or len(eta2_grid) == 0:
        raise InvalidParameterException("sweep grids must not be empty")
    if not template.open_losses:
        raise InvalidParameterException(
            f"{template.name} circuit has no open transmission to sweep"
        )
    if threads < 1:
        raise InvalidParameterException(f"thread count must be at least 1, got {threads}")
    specs = [template.bind(eta1, eta2) for eta1 in eta1_grid for eta2 in eta2_grid]
    logging.info(
        f"Sweeping {template.name} over {len(eta1_grid)} x {len(eta2_grid)} points "
        f"with {threads} worker(s)"
    )
    reports = Parallel(n_jobs=threads)(
        delayed(run)(spec, rel_tol, d_max, quad) for spec in specs
    )
    return list(reports)
