"""
Hierarquia de exceções do toolkit e códigos de saída da CLI.
"""
from typing import Optional

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_AMBIGUOUS = 3
EXIT_NUMERIC = 4


class ZulfError(Exception):
    """Erro base; cada subclasse define o código de saída da CLI."""
    exit_code = EXIT_NUMERIC


class DomainError(ZulfError, ValueError):
    """Pré-condição violada (índice fora do intervalo, eixo nulo, Nyquist...)."""
    exit_code = EXIT_CONFIG


class ConfigError(DomainError):
    """Erro de parse/validação de arquivos de molécula, medição ou execução."""

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        self.line = line
        self.source = source
        prefix = ""
        if source:
            prefix += f"{source}:"
        if line is not None:
            prefix += f"{line}:"
        super().__init__(f"{prefix} {message}".strip() if prefix else message)


class LabelingError(ZulfError):
    """Valores esperados de F² / F_z' longe de qualquer número quântico válido."""
    exit_code = EXIT_NUMERIC


class AmbiguityError(ZulfError):
    """Estimação terminou apenas com resultados ambíguos."""
    exit_code = EXIT_AMBIGUOUS


class NumericError(ZulfError):
    """Falha de otimizador, ajuste ou taxa de falhas do Monte Carlo acima do limite."""
    exit_code = EXIT_NUMERIC
