"""
Catálogo de transições, sinal temporal com decoerência, espectro de Fourier
e leitura de amplitudes de linhas por ajuste.
"""
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import curve_fit

from src import config
from src.eigen import eigensystem
from src.errors import DomainError, NumericError
from src.logging_config import get_logger
from src.schema import (
    FourierSpectrum,
    Hamiltonian,
    LineEstimate,
    ProbeState,
    SpinOperator,
    SpinSystem,
    Spectrum,
    TimeSeries,
    TransitionLine,
)

log = get_logger(__name__)

ROUNDOFF_REL = 1e-12


def _as_matrix(observable: Union[SpinOperator, np.ndarray]) -> np.ndarray:
    if isinstance(observable, SpinOperator):
        return observable.matrix
    matrix = np.asarray(observable, dtype=complex)
    if matrix.ndim != 2 or np.max(np.abs(matrix - matrix.conj().T)) > 1e-12 * max(
        1.0, np.max(np.abs(matrix))
    ):
        raise DomainError("Observável deve ser uma matriz Hermitiana")
    return matrix


def pair_amplitudes(
    hamiltonian: Hamiltonian,
    probe: ProbeState,
    observable: Union[SpinOperator, np.ndarray],
    refine_with: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Autovalores, autovetores e a matriz ρ_ij·O_ji na base própria de H.
    """
    O = _as_matrix(observable)
    if not (hamiltonian.dimension == probe.dimension == O.shape[0]):
        raise DomainError(
            f"Dimensões incompatíveis: H={hamiltonian.dimension}, "
            f"ρ₀={probe.dimension}, Ô={O.shape[0]}"
        )
    values, vectors = eigensystem(hamiltonian.matrix, refine_with=refine_with)
    rho = vectors.conj().T @ probe.deviation @ vectors
    obs = vectors.conj().T @ O @ vectors
    return values, vectors, rho * obs.T


def merge_pairs(
    freqs: np.ndarray,
    amps: np.ndarray,
    bras: np.ndarray,
    kets: np.ndarray,
    merge_tol: float,
) -> List[TransitionLine]:
    """Funde pares com frequências a até merge_tol (encadeado) por soma complexa."""
    order = np.lexsort((kets, bras, freqs))
    freqs, amps, bras, kets = freqs[order], amps[order], bras[order], kets[order]
    if freqs.size == 0:
        return []
    breaks = np.nonzero(np.diff(freqs) > merge_tol)[0] + 1
    lines = []
    for cluster in np.split(np.arange(freqs.size), breaks):
        dominant = cluster[np.argmax(np.abs(amps[cluster]))]
        lines.append(TransitionLine(
            frequency=float(freqs[dominant]),
            complex_amplitude=complex(amps[cluster].sum()),
            bra_index=int(bras[dominant]),
            ket_index=int(kets[dominant]),
            n_merged=int(cluster.size),
        ))
    return lines


def transition_catalogue(
    system: SpinSystem,
    hamiltonian: Hamiltonian,
    probe: ProbeState,
    observable: Union[SpinOperator, np.ndarray],
    refine_with: Optional[np.ndarray] = None,
) -> List[TransitionLine]:
    """
    Linhas (i<j) com frequência E_j − E_i e amplitude ⟨Ψ_i|ρ₀|Ψ_j⟩⟨Ψ_j|Ô|Ψ_i⟩.

    Pares degenerados (frequência nula) são magnetização estática e ficam de fora.
    Linhas a até MERGE_TOL_HZ são somadas; linhas abaixo de AMPLITUDE_FLOOR × máximo
    (ou do nível de arredondamento) são descartadas.
    """
    if hamiltonian.dimension != system.dimension:
        raise DomainError(
            f"Hamiltoniano de dimensão {hamiltonian.dimension} não corresponde a "
            f"{system.name} (dimensão {system.dimension})"
        )
    values, _, amps = pair_amplitudes(hamiltonian, probe, observable, refine_with)
    O = _as_matrix(observable)
    roundoff = ROUNDOFF_REL * np.linalg.norm(probe.deviation) * np.linalg.norm(O)

    bras, kets = np.triu_indices(values.size, k=1)
    freqs = values[kets] - values[bras]
    pair_amps = amps[bras, kets]
    keep = (freqs > config.MERGE_TOL_HZ) & (np.abs(pair_amps) > roundoff)

    lines = merge_pairs(freqs[keep], pair_amps[keep], bras[keep], kets[keep], config.MERGE_TOL_HZ)
    if not lines:
        return []
    peak = max(line.magnitude for line in lines)
    threshold = max(config.AMPLITUDE_FLOOR * peak, roundoff)
    return [line for line in lines if line.magnitude >= threshold]


def default_acquisition(lines: Sequence[TransitionLine], tau_coh: float) -> Tuple[float, float]:
    """(duração, taxa de amostragem): 3·τ_coh e 8× a maior frequência."""
    max_freq = max((line.frequency for line in lines), default=1.0)
    return config.ACQ_DURATION_TAU * tau_coh, config.ACQ_OVERSAMPLING * max(max_freq, 1.0)


def time_signal(
    catalogue: Sequence[TransitionLine],
    tau_coh: Optional[float],
    duration: float,
    sample_rate: float,
) -> TimeSeries:
    """
    S(t) = Σ ℜ·cos(2πνt + Φ)·e^{−t/τ_coh}, amostrado em t_n = n/fs.

    Convenção Re(a·e^{+2πiνt}): a forma cos(Φ − 2πνt) mede a fase com o sinal
    oposto (Φ → −Φ). As magnitudes ℜ não mudam.

    Raises:
        DomainError: duração/taxa inválidas ou linha acima de Nyquist
    """
    if not duration > 0:
        raise DomainError(f"duration deve ser > 0, recebido {duration}")
    if not sample_rate > 0:
        raise DomainError(f"sample_rate deve ser > 0, recebido {sample_rate}")
    for line in catalogue:
        if sample_rate <= 2.0 * line.frequency:
            log.error("nyquist_violation", frequency=line.frequency, sample_rate=sample_rate)
            raise DomainError(
                f"linha {line.frequency:.6f} Hz (autoestados {line.bra_index}→{line.ket_index}) "
                f"viola Nyquist: sample_rate={sample_rate} Hz <= 2×{line.frequency:.6f} Hz"
            )

    n_samples = max(int(round(duration * sample_rate)), 1)
    times = np.arange(n_samples) / sample_rate
    values = np.zeros(n_samples)
    for line in catalogue:
        values += np.real(line.complex_amplitude * np.exp(2j * np.pi * line.frequency * times))
    if tau_coh is not None and np.isfinite(tau_coh):
        values *= np.exp(-times / tau_coh)
    return TimeSeries(times=times, values=values, sample_rate=float(sample_rate))


def fourier_spectrum(signal: Union[TimeSeries, np.ndarray],
                     sample_rate: Optional[float] = None) -> FourierSpectrum:
    """DFT unilateral (rfft) com eixo de frequência em Hz."""
    if isinstance(signal, TimeSeries):
        values, fs = signal.values, signal.sample_rate
    else:
        values = np.asarray(signal, dtype=float)
        fs = 1.0 if sample_rate is None else float(sample_rate)
    if values.size == 0:
        raise DomainError("Série temporal vazia")
    return FourierSpectrum(
        frequencies=np.fft.rfftfreq(values.size, d=1.0 / fs),
        values=np.fft.rfft(values),
        n_samples=int(values.size),
        sample_rate=fs,
    )


def _geometric_sum(z: np.ndarray, f_bins: np.ndarray, n_samples: int, fs: float) -> np.ndarray:
    """Σ_n exp((z − 2πi f_k)·n/fs), n = 0..N−1."""
    w = (z - 2j * np.pi * f_bins) / fs
    return -np.expm1(n_samples * w) / -np.expm1(w)


def _line_model(f_bins, n_samples, fs):
    def model(_x, nu, r, a_re, a_im, b_re, b_im):
        a = a_re + 1j * a_im
        z = 2j * np.pi * nu - r
        X = 0.5 * (a * _geometric_sum(z, f_bins, n_samples, fs)
                   + np.conj(a) * _geometric_sum(np.conj(z), f_bins, n_samples, fs))
        X = X + (b_re + 1j * b_im)
        return np.concatenate([X.real, X.imag])
    return model


def _missing(target: float) -> LineEstimate:
    return LineEstimate(target=float(target), frequency=float(target), magnitude=0.0,
                        uncertainty=float("inf"), linewidth=float("nan"), missing=True)


def extract_line_amplitudes(
    spectrum: FourierSpectrum,
    target_frequencies: Sequence[float],
    window: float,
) -> List[LineEstimate]:
    """
    Ajusta, para cada alvo, o modelo exato de DFT de uma linha com decaimento
    exponencial (Lorentziana discreta) + linha de base complexa em ±window.

    Janelas sem máximo local interior acima do piso de ruído retornam linha
    ausente (magnitude 0, incerteza infinita).
    """
    freqs = spectrum.frequencies
    X = spectrum.values
    mag = np.abs(X)
    nyquist = spectrum.sample_rate / 2.0
    floor = max(5.0 * float(np.median(mag)), 1e-3 * float(mag.max(initial=0.0)))
    duration = spectrum.n_samples / spectrum.sample_rate

    estimates = []
    for target in target_frequencies:
        if not (0.0 <= target <= nyquist):
            raise DomainError(f"alvo {target} Hz fora da faixa espectral [0, {nyquist}] Hz")
        idx = np.nonzero(np.abs(freqs - target) <= window)[0]
        if idx.size < 4:
            raise DomainError(
                f"janela ±{window} Hz tem {idx.size} bins; resolução {spectrum.resolution:.4g} Hz"
            )
        local = mag[idx]
        interior = np.arange(1, idx.size - 1)
        peaks = interior[(local[interior] >= local[interior - 1])
                         & (local[interior] >= local[interior + 1])
                         & (local[interior] > floor)]
        if peaks.size == 0:
            estimates.append(_missing(target))
            continue

        kp = idx[peaks[np.argmax(local[peaks])]]
        # interpolação parabólica em |X| para o chute de frequência
        y0, y1, y2 = mag[kp - 1], mag[kp], mag[kp + 1]
        denom = y0 - 2.0 * y1 + y2
        shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
        nu0 = freqs[kp] + float(np.clip(shift, -0.5, 0.5)) * spectrum.resolution
        r0 = 3.0 / duration
        G0 = _geometric_sum(2j * np.pi * nu0 - r0, freqs[kp:kp + 1], spectrum.n_samples,
                            spectrum.sample_rate)[0]
        a0 = 2.0 * X[kp] / G0
        p0 = [nu0, r0, a0.real, a0.imag, 0.0, 0.0]

        model = _line_model(freqs[idx], spectrum.n_samples, spectrum.sample_rate)
        ydata = np.concatenate([X[idx].real, X[idx].imag])
        try:
            popt, pcov = curve_fit(model, np.zeros(ydata.size), ydata, p0=p0, maxfev=5000)
        except (RuntimeError, ValueError) as e:
            raise NumericError(f"ajuste da linha em {target} Hz falhou: {e}") from e

        nu, r, a_re, a_im = popt[:4]
        magnitude = float(np.hypot(a_re, a_im))
        if np.all(np.isfinite(pcov)) and magnitude > 0:
            grad = np.array([a_re, a_im]) / magnitude
            uncertainty = float(np.sqrt(max(grad @ pcov[2:4, 2:4] @ grad, 0.0)))
        else:
            uncertainty = float("inf")
        estimates.append(LineEstimate(
            target=float(target),
            frequency=float(nu),
            magnitude=magnitude,
            uncertainty=uncertainty,
            linewidth=float(abs(r) / np.pi),
        ))
    return estimates


def simulate_spectrum(
    system: SpinSystem,
    hamiltonian: Hamiltonian,
    probe: ProbeState,
    observable: Union[SpinOperator, np.ndarray],
    duration: Optional[float] = None,
    sample_rate: Optional[float] = None,
    refine_with: Optional[np.ndarray] = None,
) -> Spectrum:
    """Catálogo → sinal → FFT com a aquisição padrão quando não informada."""
    lines = transition_catalogue(system, hamiltonian, probe, observable, refine_with=refine_with)
    default_duration, default_rate = default_acquisition(lines, system.coherence_time)
    duration = default_duration if duration is None else duration
    sample_rate = default_rate if sample_rate is None else sample_rate
    series = time_signal(lines, system.coherence_time, duration, sample_rate)
    return Spectrum(
        lines=lines,
        linewidth=1.0 / (np.pi * system.coherence_time),
        duration=float(duration),
        sample_rate=float(sample_rate),
        series=series,
        fourier=fourier_spectrum(series),
    )
