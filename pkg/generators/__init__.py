# Generator Modules
# Epsilon abstraction, closed-form chain/fork models and random test networks
