"""
Exporters

Files written by the analyzer:
- images.py: binary PPM (P6) images, PNG through Pillow on request
- reports.py: JSON reports (schema 1) and pandas CSV diagnostics
"""

from .images import write_image, write_ppm, read_ppm, write_png
from .reports import emit_decomposition, load_report, write_json

__all__ = [
    'write_image',
    'write_ppm',
    'read_ppm',
    'write_png',
    'emit_decomposition',
    'load_report',
    'write_json',
]
