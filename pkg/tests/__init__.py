"""Module testing ``switched_lindblad``."""
