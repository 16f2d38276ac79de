# Repositories package