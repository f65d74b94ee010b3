"""
File utilities for treecrit.

Atomic writes and content digests for CLI outputs.
"""

import hashlib
import os
import tempfile
from pathlib import Path
from typing import BinaryIO, Union


def calculate_file_hash(
    file_obj: BinaryIO,
    algorithm: str = "sha256",
    chunk_size: int = 8192,
) -> str:
    """
    Calculate hash of file content.

    Args:
        file_obj: File-like object to hash
        algorithm: Hash algorithm (default: sha256)
        chunk_size: Size of chunks to read

    Returns:
        Hex digest of file hash
    """
    hasher = hashlib.new(algorithm)
    file_obj.seek(0)
    while True:
        chunk = file_obj.read(chunk_size)
        if not chunk:
            break
        hasher.update(chunk)
    file_obj.seek(0)
    return hasher.hexdigest()


def hash_path(path: Union[str, Path], algorithm: str = "sha256") -> str:
    with open(path, "rb") as fh:
        return calculate_file_hash(fh, algorithm)


def atomic_write_bytes(path: Union[str, Path], data: bytes) -> Path:
    """
    Write ``data`` to ``path`` through a temp file in the same directory.

    The destination either keeps its old content or holds the full new
    content; a failed write leaves no partial file behind.
    """
    target = Path(path)
    directory = target.parent if str(target.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    fd, temp_path = tempfile.mkstemp(dir=directory, prefix=".tmp_", suffix=f"_{target.name}")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(temp_path, target)
    except BaseException:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise
    return target


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    return atomic_write_bytes(path, text.encode("utf-8"))
