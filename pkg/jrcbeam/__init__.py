"""Covariance-based hybrid beamforming for joint radar-communications."""
