"""Compositional learners: parametrised functions, learners and the gradient-descent functor."""
