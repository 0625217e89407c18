import logging
import os
import sys
from typing import Optional

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> logging.Logger:
    """🔧 Configure root logging for the rrbeam tools (stdout plus optional file)"""

    level_name = (level or os.getenv('RRBEAM_LOG_LEVEL', 'INFO')).upper()
    log_file = log_file or os.getenv('RRBEAM_LOG_FILE')

    handlers = [logging.StreamHandler(sys.stdout)]
    if log_file:
        os.makedirs(os.path.dirname(os.path.abspath(log_file)), exist_ok=True)
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True
    )
    return logging.getLogger('rrbeam')


logger = logging.getLogger('rrbeam')
