"""Multi-exam configuration on a purpose-built set-variable solver."""
