"""Scripts package for runnable examples."""
