"""Pipelines dos comandos da CLI."""
