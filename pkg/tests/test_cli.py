"""
Testes de ponta a ponta da CLI: códigos de saída e artefatos gravados.
"""
import json

import pytest

from src.cli import main, parse_axis
from src.estimation.orientation import orientation_deviation

pytestmark = pytest.mark.integration

FIG3B = ["1.289", "0.047", "1.0788e-7"]


def _only(root, pattern):
    matches = sorted(root.glob(pattern))
    assert len(matches) == 1, matches
    return matches[0]


def test_parse_axis():
    """Testa eixos nomeados e vetoriais."""
    assert parse_axis("X") == "x"
    assert parse_axis("1,0,1") == [1.0, 0.0, 1.0]


def test_no_command_returns_config_code(capsys):
    """Testa invocação sem subcomando."""
    assert main([]) == 2


def test_presets(capsys):
    """Testa a listagem de presets."""
    assert main(["presets"]) == 0
    assert "formic_acid" in capsys.readouterr().out


def test_unknown_molecule(output_root, capsys):
    """Testa molécula desconhecida: código 2 e mensagem com os presets."""
    assert main(["spectrum", "--molecule", "unobtainium"]) == 2
    assert "formic_acid" in capsys.readouterr().err


def test_spectrum_writes_artifacts(output_root):
    """Testa spectrum: catálogo, série temporal, espectro e run_log."""
    assert main(["spectrum", "--field", "0", "0", "1e-7", "--duration", "2",
                 "--sample-rate", "2000"]) == 0

    run_dir = _only(output_root, "spectrum-*")
    for name in ("config.json", "catalogue.csv", "catalogue.json", "time_series.csv",
                 "spectrum.csv", "summary.json", "run_log.json"):
        assert (run_dir / name).exists(), name


def test_spectrum_is_reproducible(output_root):
    """Testa que a mesma configuração grava no mesmo diretório."""
    args = ["spectrum", "--duration", "1", "--sample-rate", "1000"]
    assert main(args) == 0
    assert main(args) == 0
    assert len(list(output_root.glob("spectrum-*"))) == 1


def test_list_transitions(output_root):
    """Testa list-transitions com campo oblíquo."""
    assert main(["list-transitions", "--molecule", "formaldehyde", "--field", "0.8", "0.3",
                 "5e-8", "--probe-axis", "1,1,1"]) == 0

    run_dir = _only(output_root, "list-transitions-*")
    assert (run_dir / "analytic.json").exists()
    records = json.loads((run_dir / "catalogue.json").read_text(encoding="utf-8"))
    assert records
    assert all("labels" in record for record in records)


def test_synthesize_then_estimate(output_root):
    """Testa synthesize → estimate recuperando a orientação de referência."""
    assert main(["synthesize", "--field", *FIG3B]) == 0
    measurements = _only(output_root, "synthesize-*/measurements.json")
    truth = json.loads((measurements.parent / "truth.json").read_text(encoding="utf-8"))
    assert truth["theta"] == pytest.approx(1.289)

    assert main(["estimate", "--measurements", str(measurements)]) == 0
    result_path = _only(output_root, "estimate-*/result.json")
    result = json.loads(result_path.read_text(encoding="utf-8"))

    d_theta, d_phi = orientation_deviation(result["theta_rad"], result["phi_rad"], 1.289, 0.047)
    assert abs(d_theta) < 1e-3
    assert abs(d_phi) < 1e-3
    assert result["magnitude"] == pytest.approx(1.0788e-7, rel=1e-6)
    assert result["unit"] == "T"
    assert (result_path.parent / "run_log.json").exists()


def test_estimate_rotation_rejects_field_file(output_root):
    """Testa arquivo de campo no comando de rotação: código 2."""
    assert main(["synthesize", "--field", *FIG3B]) == 0
    measurements = _only(output_root, "synthesize-*/measurements.json")
    assert main(["estimate-rotation", "--measurements", str(measurements)]) == 2


def test_estimate_invalid_measurements(output_root, tmp_path):
    """Testa arquivo de medições inválido: código 2."""
    path = tmp_path / "bad.json"
    path.write_text('{"axes": [{"guiding_axis": "x",\n "frequencies_hz": [1.0],\n'
                    ' "amplitudes": [-1.0]}]}', encoding="utf-8")
    assert main(["estimate", "--measurements", str(path)]) == 2


def test_output_dir_overrides_root(tmp_path):
    """Testa --output-dir como raiz da execução."""
    target = tmp_path / "custom"
    assert main(["synthesize", "--rotation", "0.5", "1.0", "5", "--output-dir",
                 str(target)]) == 0
    measurements = _only(target, "synthesize-*/measurements.json")
    assert json.loads(measurements.read_text(encoding="utf-8"))["mode"] == "rotation"


@pytest.mark.slow
def test_benchmark_small(output_root):
    """Testa o benchmark com 100 tentativas e os arquivos de saída."""
    assert main(["benchmark", "--trials", "100", "--seed", "1", "--workers", "2"]) == 0

    run_dir = _only(output_root, "benchmark-*")
    precision = json.loads((run_dir / "precision.json").read_text(encoding="utf-8"))
    assert precision["monte_carlo"]["trials"] == 100
    for name in ("histograms.csv", "deviations.csv", "propagation.csv", "run_log.json"):
        assert (run_dir / name).exists(), name
