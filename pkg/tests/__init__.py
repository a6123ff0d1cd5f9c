"""Unit test package for cs_sharp."""
