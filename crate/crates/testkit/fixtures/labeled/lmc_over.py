def shape(agent):
    return agent.model.layers.output.shape.dims.rank
