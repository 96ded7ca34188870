"""Classification and numerical portraits of replicator dynamics for two players with two strategies."""
