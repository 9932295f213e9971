"""Testes de benchmark."""
