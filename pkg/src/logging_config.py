"""
Configuração do structlog para o toolkit.
"""
import logging
import sys

import structlog

from src import config

_configured = False


def configure_logging(level: str = None, fmt: str = None) -> None:
    """
    Configura structlog uma única vez.

    Args:
        level: Nível de log (default: LOG_LEVEL)
        fmt: 'console' para saída legível ou 'json' para linhas JSON
    """
    global _configured
    level_name = (level or config.LOG_LEVEL).upper()
    fmt = (fmt or config.LOG_FORMAT).lower()
    numeric_level = getattr(logging, level_name, logging.INFO)

    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=numeric_level)

    renderer = (
        structlog.processors.JSONRenderer()
        if fmt == "json"
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(numeric_level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )
    _configured = True


def get_logger(name: str):
    """Retorna logger estruturado, configurando defaults na primeira chamada."""
    if not _configured:
        configure_logging()
    return structlog.get_logger(name)
