"""Content-addressed result cache with write-to-temp-then-rename atomicity.

Entries are keyed by the content hash of the canonicalized input plus
the tool version; concurrent identical runs race benignly (one rename
wins, both read back the same bytes).  An unwritable root degrades to
no-cache with a warning instead of failing the run.
"""

from __future__ import annotations

import os
import sys
import tempfile


class ResultCache:
    def __init__(self, root, enabled=True):
        self.root = root
        self.enabled = enabled and root is not None
        self.warned = False
        if self.enabled:
            try:
                os.makedirs(self.root, exist_ok=True)
            except OSError as err:
                self._degrade(err)

    def _degrade(self, err):
        if not self.warned:
            print(f"warning: cache-unwritable ({err}); continuing without cache",
                  file=sys.stderr)
            self.warned = True
        self.enabled = False

    def _path(self, key):
        return os.path.join(self.root, key[:2], key)

    def get(self, key):
        if not self.enabled:
            return None
        try:
            with open(self._path(key), "rb") as fh:
                return fh.read()
        except FileNotFoundError:
            return None
        except OSError as err:
            self._degrade(err)
            return None

    def put(self, key, data):
        if not self.enabled:
            return
        path = self._path(key)
        try:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), prefix=".tmp-")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(data)
                os.replace(tmp, path)
            except BaseException:
                try:
                    os.unlink(tmp)
                except OSError:
                    pass
                raise
        except OSError as err:
            self._degrade(err)


def cache_from_options(cache_dir, no_cache):
    if no_cache:
        return ResultCache(None, enabled=False)
    root = cache_dir or os.environ.get("INSTANTON_CACHE")
    return ResultCache(root, enabled=root is not None)
