import faulthandler
import logging
import os
import sys

from platformdirs import user_log_dir

from masker.assets import APP_BASE_DIR
from masker.settings.settings import APP_NAME

faulthandler.enable()

FILE_FORMAT = "[%(asctime)s] %(module)s.%(funcName)s:%(lineno)d %(levelname)s -> %(message)s"
CONSOLE_FORMAT = "[%(asctime)s] %(levelname)s %(message)s"


def configure_logging(log_dir: str):
    """Full debug log in `<log_dir>/logs.txt`, INFO and above on stdout."""
    os.makedirs(log_dir, exist_ok=True)
    logging.basicConfig(
        filename=os.path.join(log_dir, "logs.txt"),
        level=logging.DEBUG,
        format=FILE_FORMAT,
    )

    console = logging.StreamHandler(sys.stdout)
    console.setLevel(logging.INFO)
    console.setFormatter(logging.Formatter(CONSOLE_FORMAT, datefmt="%H:%M:%S"))
    logging.getLogger().addHandler(console)


def main():
    log_dir = user_log_dir(appname=APP_NAME)
    configure_logging(log_dir)

    from masker import cli

    logging.debug("app_dir: %s, log_dir: %s", APP_BASE_DIR, log_dir)
    sys.exit(cli.run(sys.argv[1:]))
