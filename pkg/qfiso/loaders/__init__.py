"""Spec file loader plugins; every module here registers Loader subclasses on import.

A plugin that fails to import is skipped and reported by failed_plugins().
"""
import importlib
import pkgutil

from qfiso.logger import SUB_LOGGER

LOGGER = SUB_LOGGER('loaders')

__all__ = ['failed_plugins']
_failed_plugins = {}


def failed_plugins():
    """Plugin name -> reason it could not be imported"""
    return dict(_failed_plugins)


def _load_plugins():
    # sorted, so brute-force loading tries plugins in a fixed order
    for info in sorted(pkgutil.iter_modules(__path__), key=lambda m: m.name):
        try:
            module = importlib.import_module(f"{__name__}.{info.name}")
        except ImportError as ex:
            _failed_plugins[info.name] = str(ex)
        except Exception as ex:  # pylint: disable=broad-exception-caught
            _failed_plugins[info.name] = f"Unexpected error: {ex}"
        else:
            globals()[info.name] = module
            __all__.append(info.name)
    if _failed_plugins:
        LOGGER.debug("unavailable loader plugins: %s", _failed_plugins)


_load_plugins()
