from .logging_config import configure_logging, logger

__all__ = ['configure_logging', 'logger']
