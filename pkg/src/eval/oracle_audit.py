"""
Auditoria do oráculo analítico: compara as linhas previstas pelas fórmulas
fechadas com o catálogo numérico para estrelas ¹³CHₙ (n = 1, 2, 3).
"""
import argparse
import sys
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
import pandas as pd

from src import config
from src.analytic import zeeman_lines
from src.hamiltonian import total_hamiltonian
from src.probe import thermal_probe
from src.schema import FieldVector
from src.spectrum import transition_catalogue
from src.spin_system import build_star_molecule, collective_operator

AUDIT_FIELDS_T = (0.0, 5e-8, 1e-7)
AUDIT_MOLECULES = ((1, 222.2), (2, 163.9), (3, 136.25))
# direção oblíqua: ZQ e SQ visíveis com detecção z
AUDIT_THETA = np.pi / 3
AUDIT_PHI = np.pi / 5
# prova oblíqua: com B = 0 só a componente z da prova gera sinal
AUDIT_PROBE = (1.0, 1.0, 1.0)
# piso numérico para B = 0, onde a cota de segunda ordem se anula
AUDIT_FLOOR_HZ = 10 * config.MERGE_TOL_HZ


def audit_tolerance(J: float, B: float, gamma_h: float) -> float:
    """Cota de segunda ordem (γ_h·B)²/J, com piso numérico."""
    return (gamma_h * B) ** 2 / abs(J) + AUDIT_FLOOR_HZ


def distinct_count(frequencies: Sequence[float], tol: float = AUDIT_FLOOR_HZ) -> int:
    """Número de frequências distintas (vizinhas a mais de tol)."""
    freqs = np.sort(np.asarray(frequencies, dtype=float))
    if freqs.size == 0:
        return 0
    return int(1 + np.count_nonzero(np.diff(freqs) > tol))


def match_manifold(analytic: Sequence[float], numeric: Sequence[float], tol: float,
                   kinds: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """
    Casamento nos dois sentidos dentro de um manifold: cada linha analítica com a
    numérica mais próxima e cada numérica com a analítica mais próxima.
    within_tol exige desvio <= tol e o mesmo número de linhas distintas dos dois lados.
    """
    analytic = np.asarray(analytic, dtype=float)
    numeric = np.asarray(numeric, dtype=float)
    kinds = list(kinds) if kinds is not None else ["analytic"] * analytic.size
    n_analytic, n_numeric = distinct_count(analytic), distinct_count(numeric)
    same_count = n_analytic == n_numeric

    rows = []
    for source, kind_of, values, other in (("analytic", kinds, analytic, numeric),
                                           ("numeric", None, numeric, analytic)):
        for idx, nu in enumerate(values):
            nearest = float(other[np.argmin(np.abs(other - nu))]) if other.size else np.nan
            deviation = abs(nearest - nu) if other.size else np.inf
            rows.append({
                "source": source,
                "kind": kind_of[idx] if kind_of is not None else "numeric",
                "reference_Hz": float(nu), "matched_Hz": nearest,
                "deviation_Hz": deviation, "tolerance_Hz": tol,
                "n_analytic": n_analytic, "n_numeric": n_numeric,
                "within_tol": bool(same_count and deviation <= tol),
            })
    return pd.DataFrame(rows)


def audit_star(n: int, J: float, B: float, gamma_c: Optional[float] = None,
               gamma_h: Optional[float] = None) -> pd.DataFrame:
    """
    Compara, manifold a manifold, as linhas fechadas com as linhas numéricas da banda J.
    Cada linha numérica pertence ao manifold de centro ½J(1+n−2k) mais próximo.
    """
    gamma_c = config.GAMMA_C_HZ_PER_T if gamma_c is None else gamma_c
    gamma_h = config.GAMMA_H_HZ_PER_T if gamma_h is None else gamma_h
    system = build_star_molecule(n, J, gamma_c, gamma_h, tau_coh=1.0)
    H = total_hamiltonian(system, field=FieldVector(AUDIT_THETA, AUDIT_PHI, B))
    probe = thermal_probe(system, AUDIT_PROBE)
    lines = transition_catalogue(system, H, probe, collective_operator(system, system.gammas, "z"))
    numeric = np.array([line.frequency for line in lines if line.frequency >= 0.5 * abs(J)])
    tol = audit_tolerance(J, B, gamma_h)

    manifolds = list(range(n // 2 + 1))
    centers = np.array([0.5 * J * (1 + n - 2 * k) for k in manifolds])
    owner = np.argmin(np.abs(numeric[:, None] - centers[None, :]), axis=1) \
        if numeric.size else np.array([], dtype=int)

    frames = []
    for idx, k in enumerate(manifolds):
        report = zeeman_lines(n, k, J, B, gamma_h=gamma_h, gamma_c=gamma_c)
        entries = [(nu, "zero_quantum") for nu, _ in report.zero_quantum] + \
                  [(nu, "single_quantum") for nu, _ in report.single_quantum]
        table = match_manifold([nu for nu, _ in entries], numeric[owner == idx], tol,
                               kinds=[kind for _, kind in entries])
        if table.empty:
            continue
        frames.append(table.assign(n=n, k=k, B_T=B))
    if not frames:
        return pd.DataFrame()
    return pd.concat(frames, ignore_index=True)



def run_audit(fields: Iterable[float] = AUDIT_FIELDS_T,
              molecules: Iterable = AUDIT_MOLECULES) -> pd.DataFrame:
    frames = [audit_star(n, J, B) for n, J in molecules for B in fields]
    return pd.concat(frames, ignore_index=True)


def main():
    """CLI da auditoria analítico × numérico."""
    parser = argparse.ArgumentParser(description="Compara fórmulas fechadas com o catálogo numérico")
    parser.add_argument("--csv", type=str, default="reports/eval/oracle_audit.csv",
                        help="Caminho para salvar o CSV com os detalhes")
    args = parser.parse_args()

    print("📊 Auditoria do oráculo analítico")
    table = run_audit()
    failed = table[~table["within_tol"]]
    print(f"✅ {len(table) - len(failed)}/{len(table)} linhas dentro da tolerância")

    out = Path(args.csv)
    out.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(out, index=False, float_format="%.12e")
    print(f"💾 Detalhes salvos em: {out}")

    if len(failed):
        for _, row in failed.iterrows():
            print(f"❌ n={row['n']} k={row['k']} B={row['B_T']:g}: {row['source']} {row['kind']} "
                  f"{row['reference_Hz']:.6f} Hz (desvio {row['deviation_Hz']:.3e}, "
                  f"linhas {row['n_analytic']}/{row['n_numeric']})")
        sys.exit(1)
    sys.exit(0)


if __name__ == "__main__":
    main()
