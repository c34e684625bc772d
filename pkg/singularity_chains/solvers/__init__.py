"""ODE integration for singularity-chains"""
