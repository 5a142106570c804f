# Utility Modules
# Logging, presets, network documents and the parallel runner
