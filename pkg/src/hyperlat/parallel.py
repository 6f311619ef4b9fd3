"""Process-pool sharding with ordered merge and class-number cache hand-back."""
import os
from concurrent.futures import ProcessPoolExecutor

from . import binquad


def default_workers():
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1


def _init(cache_path, values):
    binquad.CACHE.load(cache_path)
    binquad.CACHE.update(values)
    binquad.CACHE._saved.update(values)


def _call(job):
    fn, args = job
    result = fn(*args)
    return result, binquad.CACHE.pending()


def map_shards(fn, arg_tuples, workers):
    """Run fn over shards in a process pool; results come back in shard order."""
    if workers <= 1 or len(arg_tuples) <= 1:
        return [fn(*args) for args in arg_tuples]
    known = dict(binquad.CACHE.values)
    with ProcessPoolExecutor(max_workers=workers, initializer=_init,
                             initargs=(None, known)) as pool:
        out = []
        for result, fresh in pool.map(_call, [(fn, args) for args in arg_tuples]):
            binquad.CACHE.update(fresh)
            out.append(result)
    return out
