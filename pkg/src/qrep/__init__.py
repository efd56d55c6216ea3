"""Positive representations of the modular double of U_q(sl(n,R)), built and verified exactly."""
