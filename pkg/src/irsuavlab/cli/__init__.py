"""Command-line interface (`irsuavlab ...`)."""
