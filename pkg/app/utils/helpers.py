"""
Helper utility functions
"""
import os
import tempfile
from pathlib import Path
from typing import Union

from app.core.config import get_settings

settings = get_settings()


def format_real(value: float) -> str:
    """Format a float with the configured number of significant digits"""
    return f"{value:.{settings.OUTPUT_DIGITS}g}"


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    """Write text to path through a temporary sibling and a rename.

    Readers never observe a partially written file; on failure the
    temporary file is removed and the target is left untouched.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return target
