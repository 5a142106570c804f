# Output Modules
# Tab-separated report and figure tables
