"""Offline utilities for pinvtool."""

from .export_corpus import CorpusExporter

__all__ = ["CorpusExporter"]
