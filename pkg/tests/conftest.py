from hypothesis import settings

# exact arithmetic has heavy first calls (imports, jit cache); no wall-clock deadlines
settings.register_profile("nilcomplete", deadline=None)
settings.load_profile("nilcomplete")
