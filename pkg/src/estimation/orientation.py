"""
Estimação da orientação (θ, φ) por casamento de amplitudes normalizadas:
grade grossa na esfera + refinamento Nelder-Mead a partir dos mínimos locais.

Os dados de magnitude são invariantes por trocas de sinal de componentes de z′
que preservam (a menos de sinal) cada eixo-guia e o eixo de detecção. As
orientações são reportadas dobradas num representante canônico desse grupo.
"""
from itertools import product
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from src import config
from src.analytic import splitting_from_span
from src.errors import DomainError, NumericError
from src.estimation.base import AmplitudeModel, model_lines
from src.estimation.factory import get_model
from src.estimation.magnitude import magnitude_from_splitting
from src.hamiltonian import total_hamiltonian
from src.logging_config import get_logger
from src.probe import polarization_scale as thermal_scale
from src.probe import thermal_probe
from src.schema import (
    AmplitudeVector,
    EstimationResult,
    FieldVector,
    RotationVector,
    SpinSystem,
    axis_name,
    axis_vector,
)
from src.spectrum import extract_line_amplitudes, simulate_spectrum, transition_catalogue
from src.spin_system import collective_operator

log = get_logger(__name__)

POLE_TOL = 1e-12
DISTINCT_TOL = 1e-5
UNIDENTIFIABLE_SIN = 1e-3
SIMPLEX_FATOL = 1e-15
SIMPLEX_MAXITER = 4000
SIMPLEX_STEP = np.radians(1.0)
SEED_FACTOR = 4.0
SEED_SLACK = 1e-3
CURVE_SLACK = 0.1
CURVE_XATOL = 1e-10


# ============================================================================
# Simetria e dobra
# ============================================================================

def symmetry_group(guiding_axes: Sequence) -> np.ndarray:
    """
    Trocas de sinal S = diag(s) com S·k̂ ∥ k̂ para todo eixo-guia.
    Os três eixos do laboratório deixam o grupo completo (8 elementos).
    """
    K = [axis_vector(axis) for axis in guiding_axes]
    group = []
    for signs in product((1.0, -1.0), repeat=3):
        s = np.array(signs)
        if all(abs(abs(float((s * k) @ k)) - 1.0) < 1e-9 for k in K):
            group.append(s)
    return np.array(group)


def _cartesian(theta, phi) -> np.ndarray:
    theta, phi = np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
    return np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)],
                    axis=-1)


def _angles(vec: np.ndarray) -> Tuple[float, float]:
    theta = float(np.arccos(np.clip(vec[2], -1.0, 1.0)))
    if np.hypot(vec[0], vec[1]) < POLE_TOL:
        return theta, 0.0
    return theta, float(np.mod(np.arctan2(vec[1], vec[0]), 2 * np.pi))


def _images(theta: float, phi: float, group: Optional[np.ndarray]) -> np.ndarray:
    group = symmetry_group(("x", "y", "z")) if group is None else group
    return group * _cartesian(theta, phi)[None, :]


def fold_orientation(theta: float, phi: float,
                     group: Optional[np.ndarray] = None) -> Tuple[float, float]:
    """Representante canônico: imagem com (z, y, x) lexicograficamente maior."""
    images = _images(theta, phi, group)
    keys = [tuple(np.round(img[::-1], 10)) for img in images]
    return _angles(images[max(range(len(keys)), key=keys.__getitem__)])


def equivalent_orientations(theta: float, phi: float,
                            group: Optional[np.ndarray] = None) -> List[Tuple[float, float]]:
    """Todas as orientações com o mesmo espectro de magnitudes, ordenadas por (θ, φ)."""
    unique: List[np.ndarray] = []
    for img in _images(theta, phi, group):
        if all(np.linalg.norm(img - u) > DISTINCT_TOL for u in unique):
            unique.append(img)
    return sorted(_angles(u) for u in unique)


def orientation_deviation(theta: float, phi: float, true_theta: float, true_phi: float,
                          group: Optional[np.ndarray] = None) -> Tuple[float, float]:
    """(Δθ, Δφ) da imagem equivalente mais próxima da orientação verdadeira; Δφ em (−π, π]."""
    truth = _cartesian(true_theta, true_phi)
    images = _images(theta, phi, group)
    best = images[np.argmin(np.linalg.norm(images - truth, axis=1))]
    t, p = _angles(best)
    dphi = float(np.mod(p - true_phi + np.pi, 2 * np.pi) - np.pi)
    return t - true_theta, dphi


# ============================================================================
# Objetivo
# ============================================================================

class _Objective:
    """Σ_g |A_sim^(g) − A_exp^(g)|² para um conjunto fixo de medições."""

    def __init__(self, model: AmplitudeModel, measurements: Sequence[AmplitudeVector]):
        self.model = model
        self.axes = [m.axis for m in measurements]
        self.indices = [model.line_indices(m.frequencies) for m in measurements]
        self.targets = [m.entries for m in measurements]
        self.n_evaluations = 0

    def from_raw(self, raw: np.ndarray) -> np.ndarray:
        total = np.zeros(raw.shape[:-2])
        for a, (idx, target) in enumerate(zip(self.indices, self.targets)):
            sim = self.model.normalize(raw[..., a, idx])
            total = total + np.sum((sim - target) ** 2, axis=-1)
        return total

    def __call__(self, theta, phi) -> np.ndarray:
        self.n_evaluations += np.size(theta)
        return self.from_raw(self.model.raw_amplitudes(theta, phi, self.axes))

    def scalar(self, x: np.ndarray) -> float:
        return float(self(x[0], x[1])[0])

    def grid(self) -> np.ndarray:
        return self.from_raw(self.model.grid_raw(self.axes))


def orientation_residual(theta: float, phi: float, measurements: Sequence[AmplitudeVector],
                         model: AmplitudeModel) -> float:
    """Resíduo do casamento de amplitudes numa orientação."""
    return float(_Objective(model, measurements)(theta, phi)[0])


def _grid_minima(R: np.ndarray) -> np.ndarray:
    """Mínimos locais (não estritos) com φ periódico; θ tem bordas abertas."""
    tol = 1e-12 * (1.0 + np.abs(R))
    padded = np.pad(R, ((1, 1), (0, 0)), constant_values=np.inf)
    is_min = np.ones(R.shape, dtype=bool)
    for dt, dp in product((-1, 0, 1), repeat=2):
        if dt == 0 and dp == 0:
            continue
        neighbour = np.roll(padded, dp, axis=1)[1 + dt:1 + dt + R.shape[0]]
        is_min &= R <= neighbour + tol
    return np.argwhere(is_min)


def _seeds(R: np.ndarray, theta: np.ndarray, phi: np.ndarray,
           group: np.ndarray) -> List[Tuple[float, float, float]]:
    r_min = float(R.min())
    limit = SEED_FACTOR * r_min + SEED_SLACK
    cells = [c for c in _grid_minima(R) if R[c[0], c[1]] <= limit]
    cells.sort(key=lambda c: R[c[0], c[1]])
    seeds, seen = [], set()
    for i, j in cells:
        t, p = fold_orientation(theta[i], phi[j], group)
        key = (round(t, 9), round(p, 9))
        if key in seen:
            continue
        seen.add(key)
        seeds.append((t, p, float(R[i, j])))
        if len(seeds) >= config.MAX_REFINE_SEEDS:
            break
    return seeds


def _valley_mask(R: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Mínimos unidimensionais da grade: ao longo de θ (φ fixo) e ao longo de φ (θ fixo)."""
    tol = 1e-12 * (1.0 + np.abs(R))
    padded = np.pad(R, ((1, 1), (0, 0)), constant_values=np.inf)
    along_theta = (R <= padded[:-2] + tol) & (R <= padded[2:] + tol)
    along_phi = (R <= np.roll(R, 1, axis=1) + tol) & (R <= np.roll(R, -1, axis=1) + tol)
    return along_theta, along_phi


def _folded_cells(cells: np.ndarray, theta: np.ndarray, phi: np.ndarray,
                  group: np.ndarray) -> List[Tuple[float, float]]:
    out, seen = [], set()
    for i, j in cells:
        t, p = fold_orientation(theta[i], phi[j], group)
        key = (round(t, 9), round(p, 9))
        if key not in seen:
            seen.add(key)
            out.append((t, p))
    return out


def _line_search(objective: _Objective, theta0: float, phi0: float, free: str) -> dict:
    step = np.radians(config.GRID_STEP_DEG)
    if free == "theta":
        bounds = (max(theta0 - step, 0.0), min(theta0 + step, np.pi))
        res = minimize_scalar(lambda t: objective.scalar(np.array([t, phi0])), bounds=bounds,
                              method="bounded", options={"xatol": CURVE_XATOL})
        t, p = float(res.x), phi0
    else:
        res = minimize_scalar(lambda q: objective.scalar(np.array([theta0, q])),
                              bounds=(phi0 - step, phi0 + step), method="bounded",
                              options={"xatol": CURVE_XATOL})
        t, p = theta0, float(res.x)
    return {"theta": t, "phi": p, "residual": float(res.fun)}


def _trace_curve(objective: _Objective, R: np.ndarray, theta: np.ndarray, phi: np.ndarray,
                 group: np.ndarray) -> List[dict]:
    """
    Pontos do vale de resíduo mínimo, um por coluna (φ fixo) e por linha (θ fixo)
    da grade que o vale cruza. Cobre a curva com espaçamento da ordem do passo da grade.
    """
    low = R <= SEED_FACTOR * float(R.min()) + CURVE_SLACK
    along_theta, along_phi = _valley_mask(R)
    points = []
    for t0, p0 in _folded_cells(np.argwhere(along_theta & low), theta, phi, group):
        points.append(_line_search(objective, t0, p0, "theta"))
    for t0, p0 in _folded_cells(np.argwhere(along_phi & low), theta, phi, group):
        if np.sin(t0) < UNIDENTIFIABLE_SIN:
            continue
        points.append(_line_search(objective, t0, p0, "phi"))
    for point in points:
        point["theta"], point["phi"] = fold_orientation(point["theta"], point["phi"], group)
    return points


def _refine(objective: _Objective, theta0: float, phi0: float) -> dict:
    simplex = np.array([[theta0, phi0], [theta0 + SIMPLEX_STEP, phi0],
                        [theta0, phi0 + SIMPLEX_STEP]])
    res = minimize(
        objective.scalar,
        x0=np.array([theta0, phi0]),
        method="Nelder-Mead",
        options={"xatol": config.SIMPLEX_XATOL, "fatol": SIMPLEX_FATOL,
                 "maxiter": SIMPLEX_MAXITER, "initial_simplex": simplex},
    )
    # direções planas (φ não identificável) podem esgotar maxiter com simplex estacionário
    stationary = float(np.ptp(res.final_simplex[1])) <= 1e-12
    return {
        "x": res.x,
        "residual": float(res.fun),
        "converged": bool(res.success or stationary),
        "nit": int(res.nit),
    }


# ============================================================================
# Estimação
# ============================================================================

def orientation_estimate(
    measurements: Sequence[AmplitudeVector],
    system: SpinSystem,
    magnitude: float,
    mode: str = "field",
    model: Optional[AmplitudeModel] = None,
    polarization_scale: Optional[float] = None,
) -> EstimationResult:
    """
    Recupera (θ, φ) minimizando Σ_g |A_sim^(g)(θ, φ) − A_exp^(g)|².

    Args:
        measurements: Um AmplitudeVector por eixo-guia
        system: Molécula
        magnitude: |B| (T) ou |Ω| (Hz) já estimado
        mode: 'field' ou 'rotation'
        model: Modelo pré-construído (reaproveitado no Monte Carlo)

    Returns:
        EstimationResult com conjunto de ambiguidade e orientações equivalentes

    Raises:
        DomainError: Sem medições ou frequências sem linha correspondente
        NumericError: Nenhum refinamento convergiu
    """
    if not measurements:
        raise DomainError("orientation_estimate requer ao menos um AmplitudeVector")
    if model is None:
        model = get_model(mode, system, magnitude, polarization_scale)
    objective = _Objective(model, measurements)
    group = symmetry_group(objective.axes)

    theta_grid, phi_grid = model.grid_angles()
    R = objective.grid()
    if not np.all(np.isfinite(R)):
        raise NumericError("resíduo não finito na grade de orientações")
    seeds = _seeds(R, theta_grid, phi_grid, group)
    # um único eixo-guia ou muitas células baixas: o mínimo é uma curva, não pontos isolados
    low_cells = np.argwhere(R <= SEED_FACTOR * float(R.min()) + SEED_SLACK)
    curve = len(objective.axes) == 1 or \
        len(_folded_cells(low_cells, theta_grid, phi_grid, group)) > config.MAX_REFINE_SEEDS

    refined = []
    for t0, p0, _ in seeds:
        fit = _refine(objective, t0, p0)
        t, p = fold_orientation(fit["x"][0], fit["x"][1], group)
        refined.append({**fit, "theta": t, "phi": p})
    converged = [r for r in refined if r["converged"] and np.isfinite(r["residual"])]
    if not converged:
        raise NumericError(f"nenhum dos {len(refined)} refinamentos convergiu")

    converged.sort(key=lambda r: r["residual"])
    best = converged[0]
    r_min = best["residual"]
    threshold = config.AMBIGUITY_FACTOR * r_min + config.AMBIGUITY_FLOOR

    candidates = list(converged)
    if curve:
        candidates += _trace_curve(objective, R, theta_grid, phi_grid, group)

    distinct: List[np.ndarray] = []
    ambiguity = []
    for r in candidates:
        if r["residual"] > threshold:
            continue
        vec = _cartesian(r["theta"], r["phi"])
        if all(np.linalg.norm(vec - d) > DISTINCT_TOL for d in distinct):
            distinct.append(vec)
            ambiguity.append((r["theta"], r["phi"]))
    ambiguity.sort()

    # φ plano na θ ótima também torna φ não identificável
    ring = objective(np.full(phi_grid.size, best["theta"]), phi_grid)
    phi_flat = float(np.ptp(ring)) <= threshold
    phi_unidentifiable = bool(np.sin(best["theta"]) < UNIDENTIFIABLE_SIN or phi_flat)

    result = EstimationResult(
        theta=best["theta"],
        phi=best["phi"],
        magnitude=float(magnitude),
        residual=r_min,
        mode=model.mode,
        ambiguity_set=ambiguity,
        equivalent_orientations=equivalent_orientations(best["theta"], best["phi"], group),
        residual_threshold=threshold,
        phi_unidentifiable=phi_unidentifiable,
        ambiguity_curve=bool(curve and len(ambiguity) > 1),
        diagnostics={
            "grid_step_deg": config.GRID_STEP_DEG,
            "grid_min_residual": float(R.min()),
            "n_seeds": len(seeds),
            "n_converged": len(converged),
            "n_candidates_traced": len(candidates) - len(converged),
            "iterations": best["nit"],
            "n_evaluations": int(objective.n_evaluations),
            "symmetry_order": int(len(group)),
            "guiding_axes": [axis_name(k) for k in objective.axes],
        },
    )
    if result.ambiguous:
        log.warning("estimation_ambiguous", mode=model.mode, n_candidates=len(ambiguity),
                    residual=r_min, threshold=threshold, curve=result.ambiguity_curve)
    log.debug("orientation_estimate", theta=result.theta, phi=result.phi, residual=r_min,
              n_seeds=len(seeds))
    return result


def _star_parameters(system: SpinSystem) -> Tuple[int, float]:
    if not system.is_star or "J_hz" not in system.meta:
        raise DomainError(
            f"{system.name}: magnitude a partir do desdobramento exige molécula estrela ¹³CHₙ"
        )
    return int(system.n_protons), float(system.meta["J_hz"])


def splitting_from_measurements(measurements: Sequence[AmplitudeVector], system: SpinSystem,
                                mode: str = "field") -> float:
    """
    Δ_SQ a partir da largura das linhas listadas a até J/4 do centro do manifold k=0.
    Usa as frequências listadas (mesmo com amplitude nula num eixo).
    """
    n, J = _star_parameters(system)
    center = 0.5 * J * (1 + n)
    freqs = np.unique(np.concatenate([m.frequencies for m in measurements])) \
        if measurements else np.array([])
    near = freqs[np.abs(freqs - center) <= abs(J) / 4]
    if near.size < 2:
        raise DomainError(
            f"são necessárias >= 2 linhas perto de {center:.3f} Hz para obter Δ; "
            f"informe splitting_hz"
        )
    span = float(near.max() - near.min())
    return splitting_from_span(span, n, 0, mode, gamma_h=system.gammas[1],
                               gamma_c=system.gammas[0])


def vector_estimate(
    measurements: Sequence[AmplitudeVector],
    system: SpinSystem,
    mode: str = "field",
    magnitude: Optional[float] = None,
    splitting: Optional[float] = None,
    polarization_scale: Optional[float] = None,
) -> EstimationResult:
    """Magnitude (informada, de Δ ou das frequências) seguida de orientation_estimate."""
    if magnitude is None:
        n, _ = _star_parameters(system)
        if splitting is None:
            splitting = splitting_from_measurements(measurements, system, mode)
        magnitude = magnitude_from_splitting(splitting, n, 0, gamma_h=system.gammas[1],
                                             gamma_c=system.gammas[0], mode=mode)
    result = orientation_estimate(measurements, system, magnitude, mode,
                                  polarization_scale=polarization_scale)
    if splitting is not None:
        result.diagnostics["splitting_hz"] = float(splitting)
    return result


def rotation_estimate(
    measurements: Sequence[AmplitudeVector],
    system: SpinSystem,
    magnitude: Optional[float] = None,
    splitting: Optional[float] = None,
) -> EstimationResult:
    """Mesmo protocolo do campo sob H_Ω; Ω = Δ/2."""
    return vector_estimate(measurements, system, "rotation", magnitude, splitting)


# ============================================================================
# Medições sintéticas
# ============================================================================

def synthesize_measurements(
    system: SpinSystem,
    vector,
    guiding_axes: Sequence = ("x", "y", "z"),
    lines: Optional[Sequence[float]] = None,
    via_fft: bool = False,
    polarizing_field: Optional[float] = None,
    temperature: Optional[float] = None,
    duration: Optional[float] = None,
    sample_rate: Optional[float] = None,
    fit_window: float = 0.5,
) -> List[AmplitudeVector]:
    """
    Amplitudes ℜ nas linhas do modelo para cada eixo-guia.

    Args:
        vector: FieldVector ou RotationVector verdadeiro
        lines: Frequências desejadas (default: linhas da banda J)
        via_fft: Extrai as magnitudes do espectro por ajuste em vez do catálogo

    Returns:
        Lista de AmplitudeVector (um por eixo-guia)
    """
    if isinstance(vector, FieldVector):
        mode, H = "field", total_hamiltonian(system, field=vector)
    elif isinstance(vector, RotationVector):
        mode, H = "rotation", total_hamiltonian(system, rotation=vector)
    else:
        raise DomainError(f"vetor deve ser FieldVector ou RotationVector, recebido {type(vector)}")
    scale = thermal_scale(
        config.POLARIZING_FIELD_T if polarizing_field is None else polarizing_field,
        config.SAMPLE_TEMPERATURE_K if temperature is None else temperature,
    )
    model = get_model(mode, system, vector.magnitude, scale)
    freqs = model.line_frequencies[model_lines(model, lines)]
    observable = collective_operator(system, system.gammas, "z")

    window = fit_window
    if freqs.size > 1:
        window = min(fit_window, 0.45 * float(np.min(np.diff(np.sort(freqs)))))

    measurements = []
    for axis in guiding_axes:
        probe = thermal_probe(system, axis, polarizing_field, temperature)
        if via_fft:
            spectrum = simulate_spectrum(system, H, probe, observable, duration, sample_rate)
            found = extract_line_amplitudes(spectrum.fourier, freqs, window)
            entries = np.array([est.magnitude for est in found])
        else:
            catalogue = transition_catalogue(system, H, probe, observable)
            cat_f = np.array([line.frequency for line in catalogue])
            cat_m = np.array([line.magnitude for line in catalogue])
            entries = np.zeros(freqs.size)
            if cat_f.size:
                dist = np.abs(freqs[:, None] - cat_f[None, :])
                nearest = np.argmin(dist, axis=1)
                hit = dist[np.arange(freqs.size), nearest] <= 10 * config.MERGE_TOL_HZ
                entries[hit] = cat_m[nearest[hit]]
        measurements.append(AmplitudeVector(entries=entries, guiding_axis=axis, frequencies=freqs))
    return measurements
