"""Infrastructure shared by the physics modules: configuration and artifact storage."""
