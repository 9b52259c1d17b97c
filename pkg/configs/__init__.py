"""Configuration modules for qsmap.

Experiment presets, named artifact stores and homoclinic fixtures live here,
apart from the implementation code, so runs can be customized without
touching the package.
"""
