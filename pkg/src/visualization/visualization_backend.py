#!/usr/bin/env python3
"""
Half-Turn ASM Toolkit - Visualization Backend Handler
-----------------------------------------------------
Selects the non-interactive matplotlib backend and pins the settings that
make SVG output byte-identical across runs.
"""

import importlib.util
import logging
import warnings

logger = logging.getLogger(__name__)

# Suppress matplotlib warnings about font cache
warnings.filterwarnings("ignore", ".*Matplotlib is building the font cache.*")

SVG_HASH_SALT = "htsasm"

_initialized = False


def is_package_installed(package_name):
    """Check if a Python package is installed."""
    return importlib.util.find_spec(package_name) is not None


def initialize_backend(force_agg=True):
    """
    Initialize matplotlib for file output.

    Args:
        force_agg: Switch to 'Agg' even when another backend is already active

    Returns:
        tuple: (backend_name, is_interactive)
    """
    global _initialized
    # Always import matplotlib here to avoid early backend selection
    import matplotlib

    if force_agg or not _initialized:
        matplotlib.use('Agg', force=True)
    matplotlib.rcParams['svg.hashsalt'] = SVG_HASH_SALT
    matplotlib.rcParams['svg.fonttype'] = 'none'
    matplotlib.rcParams['path.simplify'] = False
    if not _initialized:
        logger.debug(f"matplotlib {matplotlib.__version__} initialised with the Agg backend")
    _initialized = True
    return 'Agg', False


def save_svg(fig, output_file):
    """Write a figure as SVG without the creation date, so identical figures give identical files."""
    import matplotlib.pyplot as plt

    try:
        fig.savefig(output_file, format='svg', metadata={'Date': None})
    finally:
        plt.close(fig)
    logger.info(f"SVG written to {output_file}")
