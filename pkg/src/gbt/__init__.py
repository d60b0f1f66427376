"""Qudit teleportation with generalized Bell states."""
