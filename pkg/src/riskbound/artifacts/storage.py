"""
JSON artifact storage with fcntl locking.

Reports and surrogate artifacts are written under an exclusive lock and
read under a shared lock, so concurrent runs never see a half-written file.
"""

import fcntl
import json
from pathlib import Path
from typing import Any, Dict

from riskbound import __version__
from riskbound.config import logger
from riskbound.errors import ConfigurationError
from riskbound.surrogate import Surrogate

SURROGATE_FORMAT = "riskbound-surrogate/1"


def write_text(file_path: Path, text: str) -> None:
    """Replace file contents with exclusive lock."""
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    with open(file_path, 'a+') as f:
        fcntl.flock(f, fcntl.LOCK_EX)
        try:
            f.seek(0)
            f.truncate()
            f.write(text)
            f.flush()
        finally:
            fcntl.flock(f, fcntl.LOCK_UN)


def read_text(file_path: Path) -> str:
    """Read file contents (shared lock)."""
    with open(file_path, 'r') as f:
        fcntl.flock(f, fcntl.LOCK_SH)
        try:
            return f.read()
        finally:
            fcntl.flock(f, fcntl.LOCK_UN)


def write_json(file_path: Path, data: Dict[str, Any]) -> None:
    write_text(file_path, json.dumps(data, indent=2) + '\n')
    logger.debug(f"[Storage] Wrote {file_path}")


def read_json(file_path: Path) -> Dict[str, Any]:
    return json.loads(read_text(file_path))


def save_surrogate(file_path: Path, surrogate: Surrogate, config_hash: str) -> None:
    """Write the surrogate artifact (coefficients as decimal strings, j1 fastest)."""
    data = {'format': SURROGATE_FORMAT, 'version': __version__, 'config_hash': config_hash}
    data.update(surrogate.to_dict())
    write_json(file_path, data)


def load_surrogate(file_path: Path) -> tuple[Surrogate, str]:
    """
    Read a surrogate artifact.

    Returns:
        (surrogate, config hash it was built from)

    Raises:
        ConfigurationError: If the file is not a surrogate artifact of a known format
    """
    data = read_json(file_path)
    if data.get('format') != SURROGATE_FORMAT:
        raise ConfigurationError(f"{file_path} is not a {SURROGATE_FORMAT} artifact (format {data.get('format')!r})")
    fields = {key: value for key, value in data.items() if key not in ('format', 'version', 'config_hash')}
    return Surrogate.from_dict(fields), data.get('config_hash', '')
