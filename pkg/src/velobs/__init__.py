"""Track pedestrians, wrap them in elliptical unsafe sets, and steer around them."""

__version__ = "0.1.0"
