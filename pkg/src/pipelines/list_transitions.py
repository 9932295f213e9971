"""
Pipeline do comando list-transitions: catálogo rotulado, auditoria das regras de
seleção e linhas previstas pelas fórmulas fechadas.
"""
from typing import Any, Dict, Optional

from src.analytic import label_catalogue, rotation_lines, selection_rule_audit, zeeman_lines
from src.hamiltonian import total_hamiltonian
from src.pipelines.common import build_system, build_vectors, detection_operator
from src.probe import thermal_probe
from src.run_logger import RunLogger
from src.run_schemas import RunConfig
from src.spectrum import transition_catalogue
from src.storage.run_store import RunStore


def run_list_transitions(cfg: RunConfig, store: RunStore,
                         run_log: Optional[RunLogger] = None) -> Dict[str, Any]:
    run_log = run_log or RunLogger("list-transitions")
    system = build_system(cfg)
    field, rotation = build_vectors(cfg)
    H = total_hamiltonian(system, field=field, rotation=rotation)
    probe = thermal_probe(system, cfg.probe_axis, cfg.constants.polarizing_field,
                          cfg.constants.temperature)
    observable = detection_operator(system)
    vector = field if field is not None else rotation
    direction = vector.cartesian() if vector is not None and vector.magnitude > 0 else None

    analytic = []
    violations = []
    if system.is_star:
        lines = label_catalogue(system, H, probe, observable, field_direction=direction)
        if direction is not None:
            for line, reason in selection_rule_audit(lines, probe.guiding_axis, direction):
                violations.append({"frequency_Hz": line.frequency, "reason": reason})
                run_log.log_warning("selection_rule_violation", frequency=line.frequency,
                                    reason=reason)
        n, J = system.n_protons, system.meta["J_hz"]
        for k in range(n // 2 + 1):
            if rotation is not None and field is None:
                report = rotation_lines(n, k, J, rotation.magnitude)
            else:
                B = field.magnitude if field is not None else 0.0
                report = zeeman_lines(n, k, J, B, gamma_h=system.gammas[1],
                                      gamma_c=system.gammas[0])
            analytic.append(report.to_dict())
    else:
        lines = transition_catalogue(system, H, probe, observable)

    store.write_config()
    store.write_catalogue(lines)
    store.write_json("analytic.json", analytic)
    summary = {
        "molecule": system.name,
        "n_lines": len(lines),
        "selection_rule_violations": violations,
        "lines": [line.to_dict() for line in lines],
    }
    store.write_json("summary.json", {k: v for k, v in summary.items() if k != "lines"})
    return summary
