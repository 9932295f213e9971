"""
Configurações do toolkit de metrologia vetorial ZULF.
Carrega variáveis de ambiente com fallbacks sensatos (valores de laboratório).
"""
import os

from dotenv import load_dotenv

# Carrega variáveis do arquivo .env se existir
load_dotenv()

# Constantes físicas (Hz/T, T, K)
GAMMA_C_HZ_PER_T = float(os.getenv("GAMMA_C_HZ_PER_T", "10.7077e6"))
GAMMA_H_HZ_PER_T = float(os.getenv("GAMMA_H_HZ_PER_T", "42.5775e6"))
POLARIZING_FIELD_T = float(os.getenv("POLARIZING_FIELD_T", "1.3"))
SAMPLE_TEMPERATURE_K = float(os.getenv("SAMPLE_TEMPERATURE_K", "298"))

# Limites numéricos
MAX_SPINS = int(os.getenv("MAX_SPINS", "12"))
HERMITIAN_TOL = float(os.getenv("HERMITIAN_TOL", "1e-10"))
MERGE_TOL_HZ = float(os.getenv("MERGE_TOL_HZ", "1e-6"))
AMPLITUDE_FLOOR = float(os.getenv("AMPLITUDE_FLOOR", "1e-10"))
DEGENERACY_TOL_HZ = float(os.getenv("DEGENERACY_TOL_HZ", "1e-7"))
LABEL_TOL = float(os.getenv("LABEL_TOL", "0.1"))
REGIME_WARN_RATIO = float(os.getenv("REGIME_WARN_RATIO", "0.1"))

# Aquisição padrão (múltiplos de tau_coh e da maior frequência)
ACQ_DURATION_TAU = float(os.getenv("ACQ_DURATION_TAU", "3"))
ACQ_OVERSAMPLING = float(os.getenv("ACQ_OVERSAMPLING", "8"))

# Estimação de orientação
GRID_STEP_DEG = float(os.getenv("GRID_STEP_DEG", "2"))
SIMPLEX_XATOL = float(os.getenv("SIMPLEX_XATOL", "1e-8"))
AMBIGUITY_FACTOR = float(os.getenv("AMBIGUITY_FACTOR", "2"))
AMBIGUITY_FLOOR = float(os.getenv("AMBIGUITY_FLOOR", "1e-9"))
MAX_REFINE_SEEDS = int(os.getenv("MAX_REFINE_SEEDS", "24"))
LINE_MATCH_TOL_HZ = float(os.getenv("LINE_MATCH_TOL_HZ", "0.05"))
MC_HIST_BINS = int(os.getenv("MC_HIST_BINS", "30"))
NOISE_REFERENCE = os.getenv("NOISE_REFERENCE", "peak").lower()

# Monte Carlo / benchmark
MC_TRIALS = int(os.getenv("MC_TRIALS", "1000"))
MC_MIN_TRIALS = int(os.getenv("MC_MIN_TRIALS", "100"))
MC_WORKERS = int(os.getenv("MC_WORKERS", str(min(8, os.cpu_count() or 1))))
MC_FAILURE_MAX_PCT = float(os.getenv("MC_FAILURE_MAX_PCT", "1"))
DELTA_SIGMA_HZ = float(os.getenv("DELTA_SIGMA_HZ", "3e-4"))
DEFAULT_SEED = int(os.getenv("DEFAULT_SEED", "20240521"))

# Thresholds do relatório de precisão
TARGET_SIGMA_THETA = float(os.getenv("TARGET_SIGMA_THETA", "0.009"))
TARGET_SIGMA_PHI = float(os.getenv("TARGET_SIGMA_PHI", "0.017"))
SIGMA_REL_TOL = float(os.getenv("SIGMA_REL_TOL", "0.3"))

# Saídas e logging
ZULF_OUTPUT_ROOT = os.getenv("ZULF_OUTPUT_ROOT", "runs")
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_FORMAT = os.getenv("LOG_FORMAT", "console").lower()


def get_physical_defaults() -> dict:
    """Retorna constantes físicas padrão usadas para preencher RunConfig."""
    return {
        "gamma_c": GAMMA_C_HZ_PER_T,
        "gamma_h": GAMMA_H_HZ_PER_T,
        "polarizing_field": POLARIZING_FIELD_T,
        "temperature": SAMPLE_TEMPERATURE_K,
    }


def get_output_root() -> str:
    """Raiz de saída lida em tempo de execução (permite override em testes)."""
    return os.getenv("ZULF_OUTPUT_ROOT", ZULF_OUTPUT_ROOT)
