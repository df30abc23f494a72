from .bruteforce import enumerate_contraction, enumerate_joint
from .random_instances import make_rng, random_gm, random_hypergraph, random_tn
