# Run configuration helpers
