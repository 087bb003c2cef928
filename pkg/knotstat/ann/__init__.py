from .network import (  # noqa: F401  imported but unused
    ActivationKind,
    Gradients,
    Network,
    NetworkSpec,
    Standardization,
    backprop,
    dump_network,
    forward,
    init_network,
    load_network,
    loss_mse_batch,
    network_from_dict,
    network_to_dict,
    param_count,
)
from .training import TrainConfig, evaluate, grad_check, train  # noqa: F401  imported but unused
