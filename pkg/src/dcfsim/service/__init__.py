"""HTTP service wrapping the simulator core."""
