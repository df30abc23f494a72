from .networks import (
    Fill,
    bubbling_order,
    build,
    cp,
    ising_grid,
    mps,
    mps_sandwich,
    no_three_way,
    peps_grid,
    tucker,
)
