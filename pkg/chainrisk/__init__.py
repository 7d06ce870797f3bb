# Critical-chain scheduling and schedule risk analysis
__version__ = "1.0.0"
