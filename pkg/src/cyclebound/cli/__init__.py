from cyclebound.cli.main import main

__all__ = ['main']
