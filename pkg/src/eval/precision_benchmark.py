"""
Benchmark de precisão da metrologia vetorial.
Monte Carlo de (θ, φ) com ruído de amplitude, tabela σ_Δ → σ_B e
repetição da recuperação de |B| a partir de Δ ruidoso.
"""
import argparse
import sys
from typing import Any, Dict, Optional

from src import config
from src.estimation import (
    PrecisionReport,
    PrecisionScenario,
    magnitude_precision,
    monte_carlo_precision,
    splitting_propagation,
)
from src.pipelines.common import build_system, single_vector
from src.run_logger import RunLogger
from src.run_schemas import RunConfig
from src.schema import FieldVector
from src.storage.run_store import RunStore

PROPAGATION_SIGMAS_HZ = (1e-4, 3e-4, 1e-3, 3e-3)
MAGNITUDE_RUN_FIELD_T = 2.9e-8
MAGNITUDE_RUNS = 300


def check_thresholds(report: PrecisionReport, target_theta: float, target_phi: float,
                     rel_tol: float) -> Dict[str, bool]:
    """σ dentro de ±rel_tol do alvo."""
    return {
        "sigma_theta": abs(report.sigma_theta - target_theta) <= rel_tol * target_theta,
        "sigma_phi": abs(report.sigma_phi - target_phi) <= rel_tol * target_phi,
    }


def run_benchmark(
    cfg: RunConfig,
    store: Optional[RunStore] = None,
    workers: Optional[int] = None,
    progress: bool = False,
    run_log: Optional[RunLogger] = None,
) -> Dict[str, Any]:
    """
    Executa o benchmark e grava precision.json, histograms.csv, deviations.csv
    e propagation.csv.

    Returns:
        Dicionário com o relatório Monte Carlo, a tabela de propagação e a
        estatística de magnitude
    """
    run_log = run_log or RunLogger("benchmark")
    system = build_system(cfg)
    vector = single_vector(cfg, default_field=True)
    mode = "field" if isinstance(vector, FieldVector) else "rotation"
    scenario = PrecisionScenario(
        system=system,
        vector=vector,
        guiding_axes=cfg.guiding_axes,
        polarizing_field=cfg.constants.polarizing_field,
        temperature=cfg.constants.temperature,
    )

    with run_log.step("monte_carlo"):
        report = monte_carlo_precision(scenario, cfg.noise_sigma, trials=cfg.trials,
                                       seed=cfg.seed, workers=workers, progress=progress)
    run_log.count("trials", report.trials)
    run_log.count("n_failed", report.n_failed)
    run_log.count("n_ambiguous", report.n_ambiguous)

    propagation = None
    magnitude = None
    if system.is_star:
        sigmas = sorted(set(PROPAGATION_SIGMAS_HZ) | {cfg.delta_sigma_hz})
        propagation = splitting_propagation(sigmas, n=system.n_protons, mode=mode,
                                            gamma_h=system.gammas[1], gamma_c=system.gammas[0])
        if mode == "field" and cfg.delta_sigma_hz > 0:
            with run_log.step("magnitude_precision"):
                magnitude = magnitude_precision(
                    MAGNITUDE_RUN_FIELD_T, cfg.delta_sigma_hz, runs=MAGNITUDE_RUNS,
                    seed=cfg.seed, n=system.n_protons, gamma_h=system.gammas[1],
                    gamma_c=system.gammas[0],
                )

    results = {
        "monte_carlo": report.to_dict(),
        "propagation": propagation.to_dict(orient="records") if propagation is not None else [],
        "magnitude_precision": magnitude.to_dict() if magnitude is not None else None,
    }
    if store is not None:
        store.write_config()
        store.write_json("precision.json", results)
        store.write_frame("histograms.csv", report.histogram_frame())
        store.write_frame("deviations.csv", report.deviation_frame())
        if propagation is not None:
            store.write_frame("propagation.csv", propagation)
    results["report"] = report
    return results


def main():
    """CLI do benchmark com verificação de limiares."""
    parser = argparse.ArgumentParser(
        description="Benchmark Monte Carlo de precisão (σ_θ, σ_φ) e propagação σ_Δ → σ_B"
    )
    parser.add_argument("--molecule", type=str, default="formic_acid",
                        help="Preset ou arquivo de molécula (default: formic_acid)")
    parser.add_argument("--noise-sigma", type=float, default=0.01,
                        help="σ do ruído de amplitude (default: 0.01)")
    parser.add_argument("--trials", type=int, default=config.MC_TRIALS,
                        help=f"Número de tentativas (default: {config.MC_TRIALS})")
    parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED,
                        help=f"Semente (default: {config.DEFAULT_SEED})")
    parser.add_argument("--workers", type=int, default=config.MC_WORKERS,
                        help=f"Threads (default: {config.MC_WORKERS})")
    parser.add_argument("--target-theta", type=float, default=config.TARGET_SIGMA_THETA,
                        help=f"σ_θ alvo (default: {config.TARGET_SIGMA_THETA})")
    parser.add_argument("--target-phi", type=float, default=config.TARGET_SIGMA_PHI,
                        help=f"σ_φ alvo (default: {config.TARGET_SIGMA_PHI})")
    parser.add_argument("--rel-tol", type=float, default=config.SIGMA_REL_TOL,
                        help=f"Tolerância relativa (default: {config.SIGMA_REL_TOL})")
    args = parser.parse_args()

    cfg = RunConfig(molecule=args.molecule, noise_sigma=args.noise_sigma, trials=args.trials,
                    seed=args.seed)
    print("📊 Benchmark de precisão")
    print(f"🧪 Molécula: {cfg.molecule} | σ={cfg.noise_sigma} | {cfg.trials} tentativas")

    store = RunStore("benchmark", cfg.snapshot())
    results = run_benchmark(cfg, store=store, workers=args.workers, progress=True)
    report = results["report"]

    print(f"   σ_θ = {report.sigma_theta:.4f} rad (alvo {args.target_theta})")
    print(f"   σ_φ = {report.sigma_phi:.4f} rad (alvo {args.target_phi})")
    print(f"   Falhas: {report.n_failed} | Ambíguos: {report.n_ambiguous}")
    print(f"💾 Resultados salvos em: {store.path}")

    checks = check_thresholds(report, args.target_theta, args.target_phi, args.rel_tol)
    if all(checks.values()):
        print("✅ Precisão dentro da tolerância")
        sys.exit(0)
    for name, ok in checks.items():
        if not ok:
            print(f"❌ {name} fora de ±{args.rel_tol:.0%} do alvo")
    sys.exit(1)


if __name__ == "__main__":
    main()
