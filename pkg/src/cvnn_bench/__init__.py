"""Complex-valued neural networks with Wirtinger backprop and a
non-circular complex Gaussian classification benchmark."""

__version__ = "0.1.0"
