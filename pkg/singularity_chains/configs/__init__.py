"""Configuration modules for singularity-chains."""
