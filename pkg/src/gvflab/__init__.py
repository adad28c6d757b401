"""gvflab: an exploration-RL laboratory.

Curiosity bonuses from ensembles of general-value-function predictors, plus
RND, NovelD and episodic-count baselines, trained with recurrent PPO on a
set of hard-exploration environments. Everything runs on the in-repo
reverse-mode autodiff core; numpy is the only runtime dependency.
"""

__version__ = "0.1.0"
