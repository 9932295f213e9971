"""
CLI do toolkit: simulação de espectros ZULF, estimação vetorial e benchmark.

Uso:
    zulf spectrum --molecule formic_acid --field 0 0 1e-7
    zulf synthesize --field 1.289 0.047 1.0788e-7
    zulf estimate --measurements runs/synthesize-<hash>/measurements.json
    zulf benchmark --trials 1000 --noise-sigma 0.01
"""
import argparse
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from src import config
from src.errors import EXIT_CONFIG, EXIT_OK, ConfigError, ZulfError
from src.eval.precision_benchmark import run_benchmark
from src.logging_config import configure_logging
from src.pipelines.estimate_vector import run_estimate
from src.pipelines.list_transitions import run_list_transitions
from src.pipelines.simulate_spectrum import run_spectrum
from src.pipelines.synthesize import run_synthesize
from src.run_logger import RunLogger
from src.run_schemas import RunConfig, load_json_model
from src.spin_system import list_presets
from src.storage.run_store import RunStore


def parse_axis(text: str):
    """'x' | 'y' | 'z' | 'a,b,c'."""
    text = text.strip().lower()
    if text in ("x", "y", "z"):
        return text
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"eixo inválido: {text}")
    if len(values) != 3:
        raise argparse.ArgumentTypeError(f"eixo deve ter 3 componentes: {text}")
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    """RunConfig do arquivo --config (se houver) sobrescrito pelas flags explícitas."""
    base = load_json_model(RunConfig, args.config) if args.config else RunConfig()
    data: Dict[str, Any] = base.model_dump()
    if args.molecule is not None:
        data["molecule"] = args.molecule
    if getattr(args, "field", None) is not None:
        theta, phi, magnitude = args.field
        data["field"] = {"theta": theta, "phi": phi, "magnitude": magnitude}
    if getattr(args, "rotation", None) is not None:
        theta, phi, magnitude = args.rotation
        data["rotation"] = {"theta": theta, "phi": phi, "magnitude": magnitude}
    if getattr(args, "probe_axis", None) is not None:
        data["probe_axis"] = args.probe_axis
    if getattr(args, "guiding_axes", None) is not None:
        data["guiding_axes"] = args.guiding_axes
    for flag, key in (("duration", "duration_s"), ("sample_rate", "sample_rate_hz"),
                      ("fit_window", "fit_window_hz")):
        if getattr(args, flag, None) is not None:
            data["acquisition"][key] = getattr(args, flag)
    for flag in ("gamma_c", "gamma_h", "polarizing_field", "temperature"):
        if getattr(args, flag, None) is not None:
            data["constants"][flag] = getattr(args, flag)
    for flag, key in (("noise_sigma", "noise_sigma"), ("trials", "trials"), ("seed", "seed"),
                      ("delta_sigma", "delta_sigma_hz"), ("output_dir", "output_dir")):
        if getattr(args, flag, None) is not None:
            data[key] = getattr(args, flag)
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first.get("loc", ()))
        raise ConfigError(f"{where}: {first.get('msg')}", source="argumentos") from e


def open_store(command: str, cfg: RunConfig, **extra: Any) -> RunStore:
    return RunStore(command, {**cfg.snapshot(), **extra}, root=cfg.output_dir)


# ============================================================================
# Comandos
# ============================================================================

def cmd_spectrum(cfg: RunConfig, args: argparse.Namespace) -> int:
    print(f"🚀 Simulando espectro: {cfg.molecule} (eixo-guia {cfg.probe_axis})")
    with RunLogger("spectrum") as run_log:
        store = open_store("spectrum", cfg)
        run_log.attach(store)
        summary = run_spectrum(cfg, store, run_log)
        run_log.log_result({k: v for k, v in summary.items() if k != "strongest_lines"})
    print(f"✅ {summary['n_lines']} linhas | aquisição {summary['duration_s']:.3g} s "
          f"a {summary['sample_rate_hz']:.4g} Hz")
    for line in summary["strongest_lines"]:
        print(f"   {line['frequency_Hz']:12.6f} Hz  |ℜ|={line['magnitude']:.4e}")
    print(f"💾 Resultados salvos em: {store.path}")
    return EXIT_OK


def cmd_list_transitions(cfg: RunConfig, args: argparse.Namespace) -> int:
    with RunLogger("list-transitions") as run_log:
        store = open_store("list-transitions", cfg)
        run_log.attach(store)
        summary = run_list_transitions(cfg, store, run_log)
        run_log.log_result({"n_lines": summary["n_lines"]})
    print(f"📊 {summary['n_lines']} transições ({summary['molecule']})")
    for line in summary["lines"]:
        labels = line.get("labels")
        tag = ""
        if labels:
            tag = (f"  |{labels['f']:g},{labels['m_f']:g};{labels['k']}⟩ → "
                   f"|{labels['f_prime']:g},{labels['m_f_prime']:g};{labels['k_prime']}⟩ "
                   f"{line['kind']}")
        print(f"   {line['frequency_Hz']:12.6f} Hz  |ℜ|={line['magnitude']:.4e}{tag}")
    for violation in summary["selection_rule_violations"]:
        print(f"⚠️  {violation['frequency_Hz']:.6f} Hz: {violation['reason']}")
    print(f"💾 Resultados salvos em: {store.path}")
    return EXIT_OK


def _cmd_estimate(cfg: RunConfig, args: argparse.Namespace, mode: str) -> int:
    command = "estimate" if mode == "field" else "estimate-rotation"
    print(f"🚀 Estimando vetor ({mode}) a partir de {args.measurements}")
    with RunLogger(command) as run_log:
        store = open_store(command, cfg, measurements=str(args.measurements))
        run_log.attach(store)
        result = run_estimate(cfg, args.measurements, store, mode=mode,
                              require_unique=args.require_unique, run_log=run_log)
        run_log.log_result(result.to_dict())
    print(f"✅ θ = {result.theta:.6f} rad | φ = {result.phi:.6f} rad | "
          f"|{'B' if mode == 'field' else 'Ω'}| = {result.magnitude:.6e} {result.unit}")
    print(f"   resíduo = {result.residual:.3e}")
    if result.phi_unidentifiable:
        print("⚠️  φ não identificável (vetor ~ paralelo a z ou φ plano)")
    if result.ambiguity_curve:
        print(f"⚠️  mínimo degenerado ao longo de uma curva: {len(result.ambiguity_set)} "
              f"orientações amostradas (ver result.json); adicione eixos-guia")
    elif result.ambiguous:
        print(f"⚠️  {len(result.ambiguity_set)} orientações compatíveis:")
        for theta, phi in result.ambiguity_set:
            print(f"   θ = {theta:.6f}, φ = {phi:.6f}")
    print(f"💾 Resultados salvos em: {store.path}")
    return EXIT_OK


def cmd_estimate(cfg: RunConfig, args: argparse.Namespace) -> int:
    return _cmd_estimate(cfg, args, "field")


def cmd_estimate_rotation(cfg: RunConfig, args: argparse.Namespace) -> int:
    return _cmd_estimate(cfg, args, "rotation")


def cmd_benchmark(cfg: RunConfig, args: argparse.Namespace) -> int:
    print(f"🚀 Benchmark: {cfg.molecule} | σ={cfg.noise_sigma} | {cfg.trials} tentativas")
    with RunLogger("benchmark") as run_log:
        store = open_store("benchmark", cfg)
        run_log.attach(store)
        results = run_benchmark(cfg, store=store, workers=args.workers,
                                progress=args.progress, run_log=run_log)
        report = results["report"]
        run_log.log_result({"sigma_theta": report.sigma_theta, "sigma_phi": report.sigma_phi,
                            "n_failed": report.n_failed, "n_ambiguous": report.n_ambiguous})
    print(f"✅ σ_θ = {report.sigma_theta:.4f} rad | σ_φ = {report.sigma_phi:.4f} rad")
    print(f"   falhas: {report.n_failed} | ambíguos: {report.n_ambiguous}")
    for row in results["propagation"]:
        print(f"   σ_Δ = {row['sigma_delta_hz']:.1e} Hz → σ = {row['sigma_magnitude']:.3e} "
              f"{row['unit']}")
    print(f"💾 Resultados salvos em: {store.path}")
    return EXIT_OK


def cmd_synthesize(cfg: RunConfig, args: argparse.Namespace) -> int:
    with RunLogger("synthesize") as run_log:
        store = open_store("synthesize", cfg)
        run_log.attach(store)
        payload = run_synthesize(cfg, store, via_fft=args.via_fft, run_log=run_log)
        run_log.log_result({"mode": payload.mode, "n_axes": len(payload.axes)})
    print(f"✅ Medições sintéticas ({payload.mode}, {len(payload.axes)} eixos)")
    print(f"💾 Arquivo de medições: {store.path / 'measurements.json'}")
    return EXIT_OK


def cmd_presets(cfg: Optional[RunConfig], args: argparse.Namespace) -> int:
    print("📚 Presets disponíveis:")
    for name, description in list_presets().items():
        print(f"   {name:16s} {description}")
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "list-transitions": cmd_list_transitions,
    "estimate": cmd_estimate,
    "estimate-rotation": cmd_estimate_rotation,
    "benchmark": cmd_benchmark,
    "synthesize": cmd_synthesize,
    "presets": cmd_presets,
}


# ============================================================================
# Parser
# ============================================================================

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=str, help="Arquivo RunConfig (JSON)")
    parser.add_argument("--molecule", type=str, help="Preset ou arquivo de molécula")
    parser.add_argument("--output-dir", type=str,
                        help=f"Raiz de saída (default: ${{ZULF_OUTPUT_ROOT}} ou {config.ZULF_OUTPUT_ROOT})")
    parser.add_argument("--gamma-c", type=float, help="γ do ¹³C (Hz/T)")
    parser.add_argument("--gamma-h", type=float, help="γ do ¹H (Hz/T)")
    parser.add_argument("--polarizing-field", type=float, help="B_p (T)")
    parser.add_argument("--temperature", type=float, help="T (K)")


def _add_vectors(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--field", type=float, nargs=3, metavar=("THETA", "PHI", "B"),
                        help="Campo: θ (rad), φ (rad), |B| (T)")
    parser.add_argument("--rotation", type=float, nargs=3, metavar=("THETA", "PHI", "OMEGA"),
                        help="Rotação: θ (rad), φ (rad), |Ω| (Hz)")


def _add_acquisition(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--duration", type=float, help="Duração da aquisição (s)")
    parser.add_argument("--sample-rate", type=float, help="Taxa de amostragem (Hz)")
    parser.add_argument("--fit-window", type=float, help="Janela do ajuste de linhas (Hz)")


def _add_guiding(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--guiding-axes", type=parse_axis, nargs="+",
                        help="Eixos-guia (x y z ou a,b,c)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zulf",
        description="Simulação ZULF e metrologia vetorial de campo/rotação com moléculas ¹³CHₙ",
    )
    parser.add_argument("--log-level", type=str, default=None, help="Nível de log")
    parser.add_argument("--log-format", type=str, choices=["console", "json"], default=None)
    subparsers = parser.add_subparsers(dest="command", help="Comandos disponíveis")

    spectrum = subparsers.add_parser("spectrum", help="Simula o espectro para um eixo-guia")
    _add_common(spectrum)
    _add_vectors(spectrum)
    _add_acquisition(spectrum)
    spectrum.add_argument("--probe-axis", type=parse_axis, help="Eixo-guia (default: z)")

    transitions = subparsers.add_parser("list-transitions",
                                        help="Catálogo rotulado + linhas analíticas")
    _add_common(transitions)
    _add_vectors(transitions)
    transitions.add_argument("--probe-axis", type=parse_axis, help="Eixo-guia (default: z)")

    for name, help_text in (("estimate", "Estima o vetor campo"),
                            ("estimate-rotation", "Estima o vetor rotação")):
        sub = subparsers.add_parser(name, help=help_text)
        _add_common(sub)
        sub.add_argument("--measurements", type=str, required=True,
                         help="Arquivo de medições (JSON)")
        sub.add_argument("--require-unique", action="store_true",
                         help="Falha (código 3) se o resultado for ambíguo")

    benchmark = subparsers.add_parser("benchmark", help="Monte Carlo de precisão")
    _add_common(benchmark)
    _add_vectors(benchmark)
    _add_guiding(benchmark)
    benchmark.add_argument("--noise-sigma", type=float, help="σ do ruído de amplitude")
    benchmark.add_argument("--trials", type=int, help="Número de tentativas")
    benchmark.add_argument("--seed", type=int, help="Semente")
    benchmark.add_argument("--delta-sigma", type=float, help="σ_Δ (Hz) para a propagação")
    benchmark.add_argument("--workers", type=int, default=None, help="Threads")
    benchmark.add_argument("--progress", action="store_true", help="Barra de progresso")

    synthesize = subparsers.add_parser("synthesize", help="Gera arquivo de medições sintéticas")
    _add_common(synthesize)
    _add_vectors(synthesize)
    _add_acquisition(synthesize)
    _add_guiding(synthesize)
    synthesize.add_argument("--via-fft", action="store_true",
                            help="Extrai amplitudes do espectro por ajuste")

    subparsers.add_parser("presets", help="Lista as moléculas distribuídas")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Ponto de entrada; retorna o código de saída."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return EXIT_CONFIG

    configure_logging(args.log_level, args.log_format)
    try:
        cfg = None if args.command == "presets" else build_config(args)
        return COMMANDS[args.command](cfg, args)
    except ZulfError as e:
        print(f"❌ {e}", file=sys.stderr)
        return e.exit_code
    except KeyboardInterrupt:
        print("\n⏹️  Operação interrompida pelo usuário.")
        return 1


if __name__ == "__main__":
    sys.exit(main())
