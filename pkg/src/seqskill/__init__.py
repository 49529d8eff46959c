"""seqskill: event representations from paired demonstration sequences.

Subpackages:
  softdtw       differentiable sequence alignment (value, gradient, oracle)
  diffcore      sequence models, optimizer step, gradient checking, checkpoints
  backbone      cross-modal event autoencoder and its training loop
  homomorphism  state/action adapters into the frozen backbone's spaces
  dynamics      long-horizon prediction models and the evaluation protocol
  synthworld    synthetic two-domain data generators and the toy environment
  evalkit       reports: dynamics table, analogy retrieval, skill quality
  cli           command-line pipeline orchestration
"""

__version__ = "0.1.0"
