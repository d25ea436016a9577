"""codeprof: multi-lingual code data profiling toolkit."""

__version__ = "0.1.0"
