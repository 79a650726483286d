def shape(agent):
    return agent.model.shape
