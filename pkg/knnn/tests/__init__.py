"""knnn test suite."""
