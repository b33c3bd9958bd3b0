"""Knowledge-distillation regression of protein-protein binding affinity."""

__version__ = "0.1.0"
