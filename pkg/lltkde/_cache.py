# Copyright 2024 The lltkde Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os
import glob
import hashlib
import pickle
import inspect
from filelock import FileLock

TMP_DIR = os.environ.get("LLTKDE_CACHE_DIR", "/tmp")

LOCK_TIMEOUT = 10

class Cache:
    """
    Pickle-based cache for benchmark work units (or any picklable object),
    keyed by an arbitrary picklable object.

    Examples
    --------
    Cache one replication of a benchmark, and ignore the cached copy if the
    benchmark module was edited after it was written:

    >>> from lltkde._cache import Cache
    >>>
    >>> key = [benchmark.config(), density_index, n_index, replication]
    >>> rows = Cache.get(key, prefix="bench", unless_file_modified=Benchmark)
    >>> if rows is None:
    >>>     rows = run_replication(...)
    >>>     Cache.set(key, rows, prefix="bench")
    """

    @classmethod
    def _get_filepath(cls, key_obj, prefix=None):
        """
        Returns the pickle path for a key. The filename contains a hex
        digest of the pickled key, so a changed key never hits a stale file.
        """
        digest = hashlib.sha224(pickle.dumps(key_obj)).hexdigest()
        return "{tmpdir}/lltkde_{prefix}_{digest}.pkl".format(
            tmpdir=TMP_DIR, prefix=prefix, digest=digest)

    @staticmethod
    def _source_file(obj):
        if isinstance(obj, str):
            return obj
        if not inspect.ismodule(obj) and not inspect.isclass(obj):
            obj = obj.__class__
        return inspect.getfile(obj)

    @classmethod
    def get(cls, key_obj, prefix=None, unless_file_modified=None):
        """
        Returns an object from cache, or None if it is not available or
        expired.

        Parameters
        ----------
        key_obj : obj, required
            the object used as the cache key (a hash of the object
            is used, therefore the object must be identical to the
            original object but need not be the original object)

        prefix : str, optional
            the prefix that was used when caching the object, if any

        unless_file_modified : str, module, class or instance, or a list of these, optional
            don't return the cached object if any of these files (or the
            files these modules, classes or instances are defined in) were
            modified after the object was cached

        Returns
        -------
        obj or None
            the cached object
        """
        filepath = cls._get_filepath(key_obj, prefix=prefix)
        if not os.path.exists(filepath):
            return None

        cache_last_modified = os.path.getmtime(filepath)

        watched = unless_file_modified
        if watched is not None and not isinstance(watched, (list, tuple)):
            watched = [watched]
        for obj in watched or []:
            if os.path.getmtime(cls._source_file(obj)) > cache_last_modified:
                return None

        lock = FileLock(filepath + ".lock")
        with lock.acquire(timeout=LOCK_TIMEOUT):
            with open(filepath, "rb") as f:
                return pickle.load(f)

    @classmethod
    def set(cls, key_obj, obj_to_cache, prefix=None):
        """
        Caches an arbitrary object using pickle.

        Parameters
        ----------
        key_obj : object, required
            an arbitrary object to use as the cache key (a hash of the object
            will be used as the key)

        obj_to_cache : object, required
            an arbitrary object to cache using pickle

        prefix : str, optional
            a prefix to use for the cache key (in case the key_obj is used for
            caching multiple objects)

        Returns
        -------
        None
        """
        filepath = cls._get_filepath(key_obj, prefix=prefix)
        lock = FileLock(filepath + ".lock")
        with lock.acquire(timeout=LOCK_TIMEOUT):
            with open(filepath, "wb") as f:
                pickle.dump(obj_to_cache, f)

    @classmethod
    def clear(cls, prefix=None):
        """
        Deletes cached pickles with the given prefix (all lltkde pickles if
        no prefix is given) and returns how many were removed.
        """
        pattern = "{tmpdir}/lltkde_{prefix}_*.pkl".format(
            tmpdir=TMP_DIR, prefix=prefix if prefix is not None else "*")
        removed = 0
        for filepath in glob.glob(pattern):
            os.remove(filepath)
            removed += 1
        return removed
