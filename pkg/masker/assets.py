import os
from typing import Optional

APP_BASE_DIR = os.path.dirname(os.path.abspath(__file__))

LEXICON_DIR = os.path.join("assets", "lexicons")


def get_path(path: str) -> str:
    return os.path.join(APP_BASE_DIR, path)


def get_lexicon_path(name: str, lexicon_dir: Optional[str] = None) -> str:
    """Bundled lexicon `name`, or the one of that name under `lexicon_dir`."""
    directory = lexicon_dir if lexicon_dir else get_path(LEXICON_DIR)
    return os.path.join(directory, f"{name}.txt")
