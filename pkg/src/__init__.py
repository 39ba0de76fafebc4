# Homomorphic lattice signatures and their security harness
