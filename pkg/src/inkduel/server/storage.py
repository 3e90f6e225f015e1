"""Content-addressed storage for uploaded illustrations.

Blobs live under ``assets/sha256-<hex>.<ext>``; writes are tempfile +
atomic rename, and storing the same bytes twice is a no-op returning the
same reference.
"""
from __future__ import annotations

import hashlib
import io
import os
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from PIL import Image, UnidentifiedImageError

from ..errors import BadMedia, TooLarge

DEFAULT_SIZE_CAP = 8 * 1024 * 1024  # 8 MiB

_MEDIA_ALIASES = {
    "png": "png",
    "image/png": "png",
    "jpeg": "jpeg",
    "jpg": "jpeg",
    "image/jpeg": "jpeg",
}
_PIL_FORMATS = {"png": "PNG", "jpeg": "JPEG"}


@dataclass(frozen=True)
class AssetRef:
    content_hash: str  # 256-bit hex digest
    media_type: str  # "png" | "jpeg"
    byte_size: int

    @property
    def token(self) -> str:
        return f"sha256:{self.content_hash}"

    def to_dict(self) -> dict:
        return {
            "content_hash": self.content_hash,
            "media_type": self.media_type,
            "byte_size": self.byte_size,
            "token": self.token,
        }


def normalize_media_type(media_type: str) -> str:
    normalized = _MEDIA_ALIASES.get(media_type.strip().lower())
    if normalized is None:
        raise BadMedia(f"unsupported media type {media_type!r} (png or jpeg only)")
    return normalized


class BlobStore:
    def __init__(self, root: str | Path, size_cap: int = DEFAULT_SIZE_CAP):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.size_cap = size_cap

    def _path(self, content_hash: str, media_type: str) -> Path:
        return self.root / f"sha256-{content_hash}.{media_type}"

    def save(self, data: bytes, media_type: str) -> AssetRef:
        """Validate, decode-check, and store; idempotent by content hash."""
        if len(data) > self.size_cap:
            raise TooLarge(f"{len(data)} bytes exceeds the {self.size_cap} byte cap")
        media = normalize_media_type(media_type)
        try:
            with Image.open(io.BytesIO(data)) as image:
                actual = image.format
                image.verify()
        except (UnidentifiedImageError, OSError) as exc:
            raise BadMedia(f"bytes do not decode as an image: {exc}") from None
        if actual != _PIL_FORMATS[media]:
            raise BadMedia(f"declared {media} but bytes decode as {actual or 'unknown'}")

        content_hash = hashlib.sha256(data).hexdigest()
        ref = AssetRef(content_hash=content_hash, media_type=media, byte_size=len(data))
        path = self._path(content_hash, media)
        if not path.exists():
            fd, tmp_name = tempfile.mkstemp(dir=self.root, prefix=".upload-")
            try:
                with os.fdopen(fd, "wb") as tmp:
                    tmp.write(data)
                os.replace(tmp_name, path)
            except BaseException:
                try:
                    os.unlink(tmp_name)
                except OSError:
                    pass
                raise
        return ref

    def exists(self, token: str) -> bool:
        return self.find(token) is not None

    def find(self, token: str) -> Path | None:
        if not token.startswith("sha256:"):
            return None
        content_hash = token[len("sha256:"):]
        for media in ("png", "jpeg"):
            path = self._path(content_hash, media)
            if path.is_file():
                return path
        return None

    def load(self, token: str) -> tuple[bytes, str] | None:
        path = self.find(token)
        if path is None:
            return None
        return path.read_bytes(), path.suffix.lstrip(".")

    def sweep_older_than(self, max_age_s: float, now: float | None = None) -> int:
        """Drop blobs untouched for longer than max_age_s; returns count removed."""
        now = time.time() if now is None else now
        removed = 0
        for entry in self.root.iterdir():
            if entry.name.startswith("sha256-") and now - entry.stat().st_mtime > max_age_s:
                entry.unlink(missing_ok=True)
                removed += 1
        return removed
