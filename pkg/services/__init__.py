"""
Services package.

Keep imports side-effect free so `python -m jobs...` only loads what a job needs.
"""
