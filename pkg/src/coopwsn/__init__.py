"""Energy-aware error control over direct and relay-cooperative sensor links."""

__version__ = "0.1.0"
