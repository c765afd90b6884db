"""craftpipe: prompt-to-3D asset pipeline for metaverse platforms.

Turns a natural-language prompt into a scaled, interaction-enabled,
optionally animated 3D object packaged as a GLB and uploaded through a
platform gateway, with deterministic mock backends for every generative
step so the whole pipeline is testable offline.
"""

__version__ = "0.1.0"
