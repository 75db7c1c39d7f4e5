"""Toolkit for implicit-aspect sentiment analysis: aspect seed extraction,
auxiliary-sentence construction, sentence-pair emission and evaluation."""

__version__ = "0.1.0"
