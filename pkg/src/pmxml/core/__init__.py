"""Core layers: errors, configuration, infoset, model, codec and pipeline."""
