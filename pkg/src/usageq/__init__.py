"""usageq: mine usage-mentioning review sentences and turn them into
yes/no preference elicitation questions."""

__version__ = "0.1.0"
