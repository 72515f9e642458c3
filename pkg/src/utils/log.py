import logging

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str = "INFO"):
    """Send log records to stderr at `level`; repeated calls reconfigure"""
    logging.basicConfig(level=level.upper(), format=LOG_FORMAT, force=True)
