# Processing Modules
# Factors, exact inference, ordering agreement and fault diagnosis
